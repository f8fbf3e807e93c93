#pragma once

#include <string>
#include <vector>

#include "fogweaver/extensibility.hpp"
#include "fogweaver/gclsched.hpp"
#include "fogweaver/nodesched.hpp"

namespace fogweaver {

enum class GanttFormat { svg, ascii };

// Extra content drawn on top of a node schedule, e.g. from admit_dynamic.
struct GanttMarks {
    std::vector<TaskSlice> dynamic;
    std::vector<DynamicMiss> misses;
    int miss_core = 0;
    Micros span = 0;  // time axis length; 0 uses the major frame
};

// One lane per core. Slices are filled boxes, partitions outlines, resumed
// slices of a preempted job carry a continuation mark, misses a red border.
std::string gantt_node(const NodeSchedule& ns, GanttFormat fmt, const GanttMarks& marks = {});

// One lane per link with traffic; windows are filled boxes.
std::string gantt_net(const NetSchedule& ns, const Scenario& s, GanttFormat fmt);

}  // namespace fogweaver
