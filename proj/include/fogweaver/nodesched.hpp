#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fogweaver/scenario.hpp"

namespace fogweaver {

struct TimeWindow {
    Micros start = 0;
    Micros end = 0;

    bool operator==(const TimeWindow&) const = default;
};

// Time windows on one core reserved for one criticality level.
struct Partition {
    std::string id;
    std::string node;
    int criticality = 0;
    int core = -1;  // -1 until mapped
    std::vector<TimeWindow> windows;

    bool operator==(const Partition&) const = default;
};

// A task of an application, pinned to a core.
struct ScheduledTask {
    std::string id;  // "<app>/<task>", unique on the node
    std::string app;
    int level = 0;
    int core = 0;
    Micros wcet = 0;
    Micros period = 0;
    Micros deadline = 0;

    double utilization() const { return wcet / period; }
    bool operator==(const ScheduledTask&) const = default;
};

struct TaskSlice {
    std::string task;
    int core = 0;
    std::string partition;
    int level = 0;
    Micros start = 0;
    Micros end = 0;
    int job_index = 0;

    bool operator==(const TaskSlice&) const = default;
};

struct NodeSchedule {
    std::string node;
    int cores = 0;
    Micros major_frame = 0;
    std::vector<ScheduledTask> tasks;
    std::vector<Partition> partitions;
    std::vector<TaskSlice> slices;  // sorted by (core, start)
    std::vector<double> per_core_utilization;

    const ScheduledTask* find_task(const std::string& id) const;
    const Partition* find_partition(const std::string& id) const;
    std::vector<const TaskSlice*> slices_on(int core) const;

    bool operator==(const NodeSchedule&) const = default;
};

// One partition per distinct criticality level, highest level first.
std::vector<Partition> assign_partitions(const std::vector<ApplicationSpec>& apps);

// First-fit decreasing by task utilization. Throws Infeasible naming the
// tasks that fit nowhere.
std::vector<ScheduledTask> map_to_cores(const std::vector<ApplicationSpec>& apps, int cores);

// Preemptive EDF per core over the node's major frame; contiguous runs of one
// level become that level's partition windows. Throws Infeasible on a miss.
NodeSchedule synthesize_node_schedule(const FogNodeSpec& node, const std::vector<ScheduledTask>& mapping);

// Recomputes partition windows and per-core utilization from the slices.
void rebuild_partitions(NodeSchedule& ns);

enum class NodeIssue {
    malformed,
    core_overlap,
    job_completion,
    isolation,
    containment,
    migration,
    utilization,
};

using NodeVerification = Report<NodeIssue>;

NodeVerification verify_node_schedule(const NodeSchedule& ns);

struct CoreUtilization {
    std::string node;
    int core = 0;
    double utilization = 0;
};

struct UtilizationReport {
    std::vector<CoreUtilization> per_core;
    double average = 0;
    CoreUtilization max;
};

UtilizationReport utilization_report(const std::vector<NodeSchedule>& schedules);

// Result of mapping + synthesis for one fog node.
struct NodeOutcome {
    std::string node;
    std::optional<NodeSchedule> schedule;
    std::string error;                  // set when schedule is empty
    std::vector<std::string> unplaced;  // tasks/jobs named by Infeasible
};

// Maps and schedules every fog node of the scenario. Outcomes follow the
// declaration order of the nodes regardless of exec.
std::vector<NodeOutcome> schedule_nodes(const Scenario& s, Exec exec = Exec::parallel);

std::vector<NodeVerification> verify_nodes(const std::vector<NodeSchedule>& schedules, Exec exec = Exec::parallel);

const char* to_string(NodeIssue issue);

}  // namespace fogweaver
