#include "fogweaver/export.hpp"

#include <algorithm>
#include <map>

namespace fogweaver {

Json gcl_to_json(const NetSchedule& ns, const Scenario& s) {
    std::map<std::size_t, std::vector<const FrameWindow*>> by_link;
    for (const auto& w : ns.windows) by_link[w.link].push_back(&w);
    Json ports = Json::array();
    for (auto& [link, ws] : by_link) {
        std::sort(ws.begin(), ws.end(), [](const FrameWindow* a, const FrameWindow* b) {
            return a->open != b->open ? a->open < b->open : a->stream < b->stream;
        });
        Json entries = Json::array();
        for (const auto* w : ws)
            entries.push_back({{"open_us", to_micros(w->open)},
                               {"close_us", to_micros(w->close)},
                               {"stream", w->stream},
                               {"instance", w->instance}});
        const std::string port = link < s.links.size() ? s.links[link].name() : std::to_string(link);
        ports.push_back({{"port", port}, {"cycle_us", to_micros(ns.cycle)}, {"entries", std::move(entries)}});
    }
    return ports;
}

Json net_summary_json(const NetSchedule& ns, const Scenario& s) {
    Json streams = Json::array();
    for (const auto& st : s.streams) {
        auto it = ns.streams.find(st.id);
        if (it == ns.streams.end()) continue;
        streams.push_back({{"id", st.id},
                           {"criticality", st.criticality},
                           {"offset_us", to_micros(it->second.offset)},
                           {"ed_us", it->second.ed},
                           {"jitter_us", it->second.jitter},
                           {"deadline_us", st.deadline}});
    }
    return {{"cycle_us", to_micros(ns.cycle)},
            {"objective", ns.objective},
            {"qoc_proxy", qoc_proxy(ns, s)},
            {"streams", std::move(streams)}};
}

Json node_schedule_to_json(const NodeSchedule& ns) {
    Json tasks = Json::array();
    for (const auto& t : ns.tasks)
        tasks.push_back({{"id", t.id},
                         {"app", t.app},
                         {"level", t.level},
                         {"core", t.core},
                         {"wcet_us", t.wcet},
                         {"period_us", t.period},
                         {"deadline_us", t.deadline}});
    Json cores = Json::array();
    for (int c = 0; c < ns.cores; ++c) {
        Json windows = Json::array();
        for (const auto& p : ns.partitions) {
            if (p.core != c) continue;
            for (const auto& w : p.windows)
                windows.push_back(
                    {{"partition", p.id}, {"level", p.criticality}, {"start_us", w.start}, {"end_us", w.end}});
        }
        std::stable_sort(windows.begin(), windows.end(), [](const Json& a, const Json& b) {
            return a["start_us"].get<double>() < b["start_us"].get<double>();
        });
        Json slices = Json::array();
        for (const TaskSlice* sl : ns.slices_on(c))
            slices.push_back({{"task", sl->task},
                              {"partition", sl->partition},
                              {"level", sl->level},
                              {"job", sl->job_index},
                              {"start_us", sl->start},
                              {"end_us", sl->end}});
        const double u =
            static_cast<std::size_t>(c) < ns.per_core_utilization.size() ? ns.per_core_utilization[c] : 0.0;
        cores.push_back({{"core", c}, {"utilization", u}, {"windows", std::move(windows)}, {"slices", std::move(slices)}});
    }
    return {{"node", ns.node}, {"major_frame_us", ns.major_frame}, {"tasks", std::move(tasks)}, {"cores", std::move(cores)}};
}

NodeSchedule node_schedule_from_json(const Json& j) {
    try {
        NodeSchedule ns;
        ns.node = j.at("node").get<std::string>();
        ns.major_frame = j.at("major_frame_us").get<double>();
        for (const auto& t : j.at("tasks"))
            ns.tasks.push_back({t.at("id").get<std::string>(), t.at("app").get<std::string>(), t.at("level").get<int>(),
                                t.at("core").get<int>(), t.at("wcet_us").get<double>(), t.at("period_us").get<double>(),
                                t.at("deadline_us").get<double>()});
        const auto& cores = j.at("cores");
        ns.cores = static_cast<int>(cores.size());
        std::map<std::pair<int, int>, Partition> parts;  // (core, -level)
        for (const auto& c : cores) {
            const int core = c.at("core").get<int>();
            ns.per_core_utilization.push_back(c.at("utilization").get<double>());
            for (const auto& w : c.at("windows")) {
                const int level = w.at("level").get<int>();
                Partition& p = parts[{core, -level}];
                p.id = w.at("partition").get<std::string>();
                p.node = ns.node;
                p.core = core;
                p.criticality = level;
                p.windows.push_back({w.at("start_us").get<double>(), w.at("end_us").get<double>()});
            }
            for (const auto& sl : c.at("slices"))
                ns.slices.push_back({sl.at("task").get<std::string>(), core, sl.at("partition").get<std::string>(),
                                     sl.at("level").get<int>(), sl.at("start_us").get<double>(),
                                     sl.at("end_us").get<double>(), sl.at("job").get<int>()});
        }
        for (const auto& t : ns.tasks) {
            auto [it, fresh] = parts.try_emplace({t.core, -t.level});
            if (fresh) {
                it->second.id = ns.node + "/c" + std::to_string(t.core) + "/L" + std::to_string(t.level);
                it->second.node = ns.node;
                it->second.core = t.core;
                it->second.criticality = t.level;
            }
        }
        for (auto& [key, p] : parts) ns.partitions.push_back(std::move(p));
        return ns;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed node schedule: ") + e.what());
    }
}

Json admission_to_json(const AdmissionReport& r) {
    Json admitted = Json::object();
    for (const auto& [task, ok] : r.admitted) admitted[task] = ok;
    Json misses = Json::array();
    for (const auto& m : r.misses)
        misses.push_back({{"task", m.task}, {"release_us", m.release}, {"deadline_us", m.deadline}});
    return {{"core", r.core},
            {"horizon_us", r.horizon},
            {"admitted", std::move(admitted)},
            {"misses", std::move(misses)},
            {"dynamic_slices", r.dynamic_slices.size()}};
}

Json overhead_to_json(const OverheadReport& r) {
    Json streams = Json::array();
    for (const auto& d : r.streams)
        streams.push_back({{"id", d.id}, {"ed_before_us", d.before}, {"ed_after_us", d.after}, {"delta_us", d.delta}});
    return {{"streams", std::move(streams)}, {"avg_delta_us", r.average}};
}

Json overlay_to_json(const SecurityOverlay& o) {
    Json tasks = Json::array();
    for (const auto& t : o.tasks)
        tasks.push_back({{"id", t.id},
                         {"stream", t.stream},
                         {"host", t.host},
                         {"role", to_string(t.role)},
                         {"level", t.level},
                         {"wcet_us", t.wcet},
                         {"period_us", t.period},
                         {"placed", t.placed}});
    Json streams = Json::array();
    for (const auto& st : o.streams)
        streams.push_back({{"id", st.id}, {"size_before", st.size_before}, {"size_after", st.size_after}});
    return {{"streams", std::move(streams)}, {"tasks", std::move(tasks)}};
}

}  // namespace fogweaver
