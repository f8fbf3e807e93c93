#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fogweaver/nodesched.hpp"

namespace fogweaver {

struct IdleProfile {
    int core = 0;
    std::vector<TimeWindow> intervals;  // sorted, disjoint
};

// Complement of the core's busy slices over [0, major_frame). Gaps at the
// frame start and frame end are separate intervals.
IdleProfile idle_profile(const NodeSchedule& ns, int core);

// Population standard deviation of idle-interval lengths over major_frame;
// 0 with fewer than two idle intervals.
double ext_metric(const NodeSchedule& ns, int core);

struct OptimizerOptions {
    std::size_t iteration_budget = 200'000;  // slice visits
    std::uint64_t seed = 0;                  // 0 visits slices in time order
};

// Local search shifting slices inside their free gap and job window. A move
// is kept only if it strictly lowers ext_metric without merging idle
// intervals, so the metric never increases.
NodeSchedule optimize_extensibility(const NodeSchedule& ns, const OptimizerOptions& opts = {});

struct DynamicMiss {
    std::string task;
    Micros release = 0;
    Micros deadline = 0;
};

struct AdmissionReport {
    int core = 0;
    Micros horizon = 0;
    std::map<std::string, bool> admitted;  // task -> no miss over the horizon
    std::vector<DynamicMiss> misses;        // sorted by deadline
    std::vector<TaskSlice> dynamic_slices;
};

// EDF simulation of the dynamic tasks inside the static idle time of one
// core over `horizon`. A job that reaches its deadline unfinished is recorded
// as a miss and dropped. The static schedule is not touched.
AdmissionReport admit_dynamic(const NodeSchedule& ns, int core, const std::vector<TaskSpec>& dynamic, Micros horizon);

}  // namespace fogweaver
