#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "fogweaver/nodesched.hpp"

namespace fogweaver {

const char* to_string(NodeIssue issue) {
    switch (issue) {
        case NodeIssue::malformed: return "Malformed";
        case NodeIssue::core_overlap: return "CoreOverlap";
        case NodeIssue::job_completion: return "JobCompletion";
        case NodeIssue::isolation: return "Isolation";
        case NodeIssue::containment: return "Containment";
        case NodeIssue::migration: return "Migration";
        case NodeIssue::utilization: return "Utilization";
    }
    return "?";
}

namespace {

std::string span(Micros a, Micros b) {
    std::ostringstream o;
    o << "[" << a << "," << b << ")";
    return o.str();
}

bool inside(const TaskSlice& sl, const TimeWindow& w) {
    return sl.start >= w.start - kTimeEps && sl.end <= w.end + kTimeEps;
}

}  // namespace

NodeVerification verify_node_schedule(const NodeSchedule& ns) {
    NodeVerification r;
    const std::string node = "node " + ns.node + ": ";
    if (ns.cores < 1) r.add(NodeIssue::malformed, node + "no cores");

    std::map<std::string, const ScheduledTask*> tasks;
    for (const auto& t : ns.tasks) {
        if (!tasks.emplace(t.id, &t).second) r.add(NodeIssue::malformed, node + "task " + t.id + " listed twice");
        if (t.core < 0 || t.core >= ns.cores) r.add(NodeIssue::malformed, node + "task " + t.id + " has no valid core");
        if (!(t.period > 0) || !(t.wcet > 0)) r.add(NodeIssue::malformed, node + "task " + t.id + " bad timing");
    }
    std::map<std::string, const Partition*> parts;
    for (const auto& p : ns.partitions) {
        parts.emplace(p.id, &p);
        for (std::size_t i = 0; i < p.windows.size(); ++i) {
            const auto& w = p.windows[i];
            if (w.end <= w.start || w.start < -kTimeEps || w.end > ns.major_frame + kTimeEps)
                r.add(NodeIssue::malformed, node + "partition " + p.id + " window " + span(w.start, w.end) + " invalid");
            if (i > 0 && w.start < p.windows[i - 1].end - kTimeEps)
                r.add(NodeIssue::malformed, node + "partition " + p.id + " windows unsorted or overlapping");
        }
    }

    // partition windows of one core must not overlap each other
    std::map<int, std::vector<std::pair<TimeWindow, const Partition*>>> core_windows;
    for (const auto& p : ns.partitions)
        for (const auto& w : p.windows) core_windows[p.core].push_back({w, &p});
    for (auto& [core, ws] : core_windows) {
        std::sort(ws.begin(), ws.end(), [](const auto& a, const auto& b) { return a.first.start < b.first.start; });
        for (std::size_t i = 1; i < ws.size(); ++i)
            if (ws[i].first.start < ws[i - 1].first.end - kTimeEps)
                r.add(NodeIssue::core_overlap, node + "core " + std::to_string(core) + " partition windows of " +
                                                   ws[i - 1].second->id + " and " + ws[i].second->id + " overlap");
    }

    std::map<std::pair<std::string, int>, Micros> executed;  // (task, job) -> time
    std::vector<double> busy(static_cast<std::size_t>(std::max(ns.cores, 0)), 0.0);
    for (const auto& sl : ns.slices) {
        const std::string who = node + sl.task + "#" + std::to_string(sl.job_index) + " " + span(sl.start, sl.end);
        if (sl.end <= sl.start || sl.start < -kTimeEps || sl.end > ns.major_frame + kTimeEps) {
            r.add(NodeIssue::malformed, who + " is empty or outside the major frame");
            continue;
        }
        auto t = tasks.find(sl.task);
        if (t == tasks.end()) {
            r.add(NodeIssue::malformed, who + " names an unknown task");
            continue;
        }
        const ScheduledTask& task = *t->second;
        if (sl.core != task.core)
            r.add(NodeIssue::migration, who + " runs on core " + std::to_string(sl.core) + " but the task is pinned to " +
                                            std::to_string(task.core));
        if (sl.core >= 0 && sl.core < ns.cores) busy[static_cast<std::size_t>(sl.core)] += sl.end - sl.start;

        auto p = parts.find(sl.partition);
        if (p == parts.end()) {
            r.add(NodeIssue::containment, who + " references missing partition " + sl.partition);
        } else {
            const Partition& part = *p->second;
            if (part.criticality != task.level || sl.level != task.level)
                r.add(NodeIssue::isolation, who + " level " + std::to_string(task.level) + " runs in level-" +
                                                std::to_string(part.criticality) + " partition " + part.id);
            const bool contained =
                part.core == sl.core &&
                std::any_of(part.windows.begin(), part.windows.end(), [&](const TimeWindow& w) { return inside(sl, w); });
            if (!contained) r.add(NodeIssue::containment, who + " lies outside every window of " + part.id);
        }

        const Micros release = sl.job_index * task.period;
        if (sl.job_index < 0 || sl.start < release - kTimeEps || sl.end > release + task.deadline + kTimeEps)
            r.add(NodeIssue::job_completion, who + " executes outside its job window " +
                                                 span(release, release + task.deadline));
        executed[{sl.task, sl.job_index}] += sl.end - sl.start;
    }

    for (int c = 0; c < ns.cores; ++c) {
        auto on_core = ns.slices_on(c);
        for (std::size_t i = 1; i < on_core.size(); ++i)
            if (on_core[i]->start < on_core[i - 1]->end - kTimeEps)
                r.add(NodeIssue::core_overlap, node + "core " + std::to_string(c) + ": " + on_core[i - 1]->task + " " +
                                                   span(on_core[i - 1]->start, on_core[i - 1]->end) + " overlaps " +
                                                   on_core[i]->task + " " + span(on_core[i]->start, on_core[i]->end));
        const double u = ns.major_frame > 0 ? busy[static_cast<std::size_t>(c)] / ns.major_frame : 0.0;
        if (u > 1.0 + 1e-9) r.add(NodeIssue::utilization, node + "core " + std::to_string(c) + " over-utilized");
        const double recorded = static_cast<std::size_t>(c) < ns.per_core_utilization.size()
                                    ? ns.per_core_utilization[static_cast<std::size_t>(c)]
                                    : -1.0;
        if (std::abs(recorded - u) > 1e-9)
            r.add(NodeIssue::utilization, node + "core " + std::to_string(c) + " recorded utilization disagrees");
    }

    for (const auto& t : ns.tasks) {
        if (!(t.period > 0) || ns.major_frame <= 0) continue;
        const double jobs = ns.major_frame / t.period;
        if (std::abs(jobs - std::round(jobs)) > 1e-9) {
            r.add(NodeIssue::malformed, node + "task " + t.id + " period does not divide the major frame");
            continue;
        }
        for (int k = 0; k < static_cast<int>(std::llround(jobs)); ++k) {
            auto it = executed.find({t.id, k});
            const Micros got = it == executed.end() ? 0.0 : it->second;
            if (std::abs(got - t.wcet) > kTimeEps * std::max(1.0, t.wcet))
                r.add(NodeIssue::job_completion, node + t.id + "#" + std::to_string(k) + " received " +
                                                     std::to_string(got) + "us of " + std::to_string(t.wcet) + "us");
        }
    }
    return r;
}

std::vector<NodeVerification> verify_nodes(const std::vector<NodeSchedule>& schedules, Exec exec) {
    std::vector<NodeVerification> out(schedules.size());
    const auto n = schedules.size();
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::size_t i = 0; i < n; ++i) out[i] = verify_node_schedule(schedules[i]);
    } else {
        for (std::size_t i = 0; i < n; ++i) out[i] = verify_node_schedule(schedules[i]);
    }
    return out;
}

}  // namespace fogweaver
