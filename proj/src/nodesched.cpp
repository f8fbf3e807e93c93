#include "fogweaver/nodesched.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace fogweaver {

const ScheduledTask* NodeSchedule::find_task(const std::string& id) const {
    for (const auto& t : tasks)
        if (t.id == id) return &t;
    return nullptr;
}

const Partition* NodeSchedule::find_partition(const std::string& id) const {
    for (const auto& p : partitions)
        if (p.id == id) return &p;
    return nullptr;
}

std::vector<const TaskSlice*> NodeSchedule::slices_on(int core) const {
    std::vector<const TaskSlice*> out;
    for (const auto& sl : slices)
        if (sl.core == core) out.push_back(&sl);
    std::sort(out.begin(), out.end(), [](const TaskSlice* a, const TaskSlice* b) { return a->start < b->start; });
    return out;
}

std::vector<Partition> assign_partitions(const std::vector<ApplicationSpec>& apps) {
    if (apps.empty()) return {};
    std::set<int, std::greater<>> levels;
    for (const auto& a : apps) levels.insert(a.level);
    std::vector<Partition> out;
    for (int level : levels) {
        Partition p;
        p.node = apps.front().node;
        p.criticality = level;
        p.id = p.node + "/L" + std::to_string(level);
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<ScheduledTask> map_to_cores(const std::vector<ApplicationSpec>& apps, int cores) {
    if (cores < 1) throw std::invalid_argument("map_to_cores: need at least one core");
    std::vector<ScheduledTask> tasks;
    for (const auto& a : apps)
        for (const auto& t : expand_tasks(a))
            tasks.push_back({a.id + "/" + t.id, a.id, a.level, -1, t.wcet, t.period, t.deadline});

    std::vector<std::size_t> order(tasks.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return tasks[a].utilization() > tasks[b].utilization();
    });

    std::vector<double> load(static_cast<std::size_t>(cores), 0.0);
    std::vector<std::string> unplaced;
    for (std::size_t i : order) {
        const double u = tasks[i].utilization();
        for (int c = 0; c < cores; ++c) {
            if (load[static_cast<std::size_t>(c)] + u <= 1.0 + 1e-9) {
                load[static_cast<std::size_t>(c)] += u;
                tasks[i].core = c;
                break;
            }
        }
        if (tasks[i].core < 0) unplaced.push_back(tasks[i].id);
    }
    if (!unplaced.empty()) throw Infeasible("tasks do not fit on " + std::to_string(cores) + " core(s)", unplaced);
    return tasks;
}

namespace {

struct Job {
    std::size_t task = 0;
    int index = 0;
    Micros release = 0;
    Micros deadline = 0;
    Micros remaining = 0;
};

std::string partition_id(const std::string& node, int core, int level) {
    return node + "/c" + std::to_string(core) + "/L" + std::to_string(level);
}

void edf_core(const std::string& node, const std::vector<ScheduledTask>& tasks, int core, Micros frame,
              std::vector<TaskSlice>& out) {
    std::vector<Job> jobs;
    for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
        const auto& t = tasks[ti];
        if (t.core != core) continue;
        const auto count = static_cast<int>(std::llround(frame / t.period));
        for (int k = 0; k < count; ++k)
            jobs.push_back({ti, k, k * t.period, k * t.period + t.deadline, t.wcet});
    }
    std::stable_sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) { return a.release < b.release; });

    auto before = [&](const Job& a, const Job& b) {
        if (a.deadline != b.deadline) return a.deadline < b.deadline;
        if (tasks[a.task].level != tasks[b.task].level) return tasks[a.task].level > tasks[b.task].level;
        if (a.task != b.task) return a.task < b.task;
        return a.index < b.index;
    };

    std::vector<Job> ready;
    std::size_t next = 0;
    Micros t = 0;
    const std::size_t first_slice = out.size();
    while (next < jobs.size() || !ready.empty()) {
        if (ready.empty()) t = std::max(t, jobs[next].release);
        while (next < jobs.size() && jobs[next].release <= t + kTimeEps) ready.push_back(jobs[next++]);

        auto top = std::min_element(ready.begin(), ready.end(), before);
        const Micros horizon = next < jobs.size() ? jobs[next].release : std::numeric_limits<Micros>::infinity();
        const Micros end = std::min(t + top->remaining, horizon);
        const auto& task = tasks[top->task];

        TaskSlice* last = out.size() > first_slice ? &out.back() : nullptr;
        if (last && last->task == task.id && last->job_index == top->index && std::abs(last->end - t) <= kTimeEps) {
            last->end = end;
        } else {
            out.push_back({task.id, core, partition_id(node, core, task.level), task.level, t, end, top->index});
        }
        top->remaining -= end - t;
        t = end;
        if (top->remaining <= kTimeEps) {
            if (t > top->deadline + kTimeEps) {
                std::ostringstream msg;
                msg << "job " << task.id << "#" << top->index << " released at " << top->release
                    << "us completes at " << t << "us after its deadline " << top->deadline << "us";
                throw Infeasible(msg.str(), {task.id + "#" + std::to_string(top->index)});
            }
            ready.erase(top);
        }
    }
}

}  // namespace

NodeSchedule synthesize_node_schedule(const FogNodeSpec& node, const std::vector<ScheduledTask>& mapping) {
    NodeSchedule ns;
    ns.node = node.id;
    ns.cores = node.cores;
    ns.tasks = mapping;
    for (const auto& t : mapping)
        if (t.core < 0 || t.core >= node.cores)
            throw std::invalid_argument("task " + t.id + " is not mapped to a core of " + node.id);
    if (!mapping.empty()) {
        std::vector<Micros> periods;
        for (const auto& t : mapping) periods.push_back(t.period);
        ns.major_frame = hyperperiod(periods);
    }
    for (int c = 0; c < node.cores; ++c) edf_core(node.id, ns.tasks, c, ns.major_frame, ns.slices);
    rebuild_partitions(ns);
    return ns;
}

void rebuild_partitions(NodeSchedule& ns) {
    std::stable_sort(ns.slices.begin(), ns.slices.end(), [](const TaskSlice& a, const TaskSlice& b) {
        return a.core != b.core ? a.core < b.core : a.start < b.start;
    });

    std::map<std::pair<int, int>, Partition> parts;  // (core, -level)
    auto part_for = [&](int core, int level) -> Partition& {
        auto [it, fresh] = parts.try_emplace({core, -level});
        if (fresh) {
            it->second.id = partition_id(ns.node, core, level);
            it->second.node = ns.node;
            it->second.core = core;
            it->second.criticality = level;
        }
        return it->second;
    };
    for (const auto& t : ns.tasks) part_for(t.core, t.level);

    ns.per_core_utilization.assign(static_cast<std::size_t>(std::max(ns.cores, 0)), 0.0);
    const TaskSlice* prev = nullptr;
    for (auto& sl : ns.slices) {
        Partition& p = part_for(sl.core, sl.level);
        sl.partition = p.id;
        const bool extend = prev && prev->core == sl.core && prev->level == sl.level &&
                            std::abs(prev->end - sl.start) <= kTimeEps && !p.windows.empty();
        if (extend) p.windows.back().end = sl.end;
        else p.windows.push_back({sl.start, sl.end});
        if (sl.core >= 0 && sl.core < ns.cores)
            ns.per_core_utilization[static_cast<std::size_t>(sl.core)] += sl.end - sl.start;
        prev = &sl;
    }
    for (auto& u : ns.per_core_utilization) u = ns.major_frame > 0 ? u / ns.major_frame : 0.0;

    ns.partitions.clear();
    for (auto& [key, p] : parts) ns.partitions.push_back(std::move(p));
}

UtilizationReport utilization_report(const std::vector<NodeSchedule>& schedules) {
    UtilizationReport r;
    double sum = 0;
    for (const auto& ns : schedules) {
        for (int c = 0; c < ns.cores; ++c) {
            const double u = static_cast<std::size_t>(c) < ns.per_core_utilization.size()
                                 ? ns.per_core_utilization[static_cast<std::size_t>(c)]
                                 : 0.0;
            r.per_core.push_back({ns.node, c, u});
            sum += u;
            if (r.per_core.size() == 1 || u > r.max.utilization + 1e-12) r.max = r.per_core.back();
        }
    }
    r.average = r.per_core.empty() ? 0.0 : sum / static_cast<double>(r.per_core.size());
    return r;
}

std::vector<NodeOutcome> schedule_nodes(const Scenario& s, Exec exec) {
    std::vector<NodeOutcome> out(s.nodes.size());
    auto one = [&](std::size_t i) {
        const auto& node = s.nodes[i];
        NodeOutcome& o = out[i];
        o.node = node.id;
        try {
            o.schedule = synthesize_node_schedule(node, map_to_cores(s.apps_on(node.id), node.cores));
        } catch (const Infeasible& e) {
            o.error = e.what();
            o.unplaced = e.names();
        } catch (const std::exception& e) {
            // nothing may escape an OpenMP region
            o.error = e.what();
        }
    };
    const auto n = s.nodes.size();
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::size_t i = 0; i < n; ++i) one(i);
    } else {
        for (std::size_t i = 0; i < n; ++i) one(i);
    }
    return out;
}

}  // namespace fogweaver
