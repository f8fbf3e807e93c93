#include "fogweaver/teslasec.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fogweaver/nodesched.hpp"

namespace fogweaver {

const char* to_string(SecurityRole role) { return role == SecurityRole::sign ? "sign" : "verify"; }

namespace {

void check(const TeslaConfig& cfg) {
    if (!(cfg.key_interval > 0) || to_ticks(cfg.key_interval) < 1)
        throw std::invalid_argument("tesla: key interval must be at least 0.1us");
    if (cfg.disclosure_delay < 0) throw std::invalid_argument("tesla: negative disclosure delay");
    if (cfg.sign_wcet < 0 || cfg.verify_wcet < 0) throw std::invalid_argument("tesla: negative task time");
    if (cfg.mac_bytes < 0 || cfg.key_bytes < 0) throw std::invalid_argument("tesla: negative field size");
}

bool secured(const TeslaConfig& cfg, const std::string& id) {
    return !cfg.streams || std::find(cfg.streams->begin(), cfg.streams->end(), id) != cfg.streams->end();
}

}  // namespace

TeslaApplied apply_tesla(const Scenario& s, const NetSchedule& ns, const TeslaConfig& cfg) {
    check(cfg);
    if (cfg.streams)
        for (const auto& id : *cfg.streams)
            if (!s.find_stream(id)) throw UnknownReference("tesla: unknown stream " + id);

    TeslaApplied out;
    out.secured = s;
    for (auto& st : out.secured.streams) {
        if (!secured(cfg, st.id)) continue;
        auto sched = ns.streams.find(st.id);
        if (sched == ns.streams.end()) throw StreamNotScheduled("stream " + st.id + " has no schedule");

        SecuredStream sec;
        sec.id = st.id;
        sec.size_before = st.size_bytes;
        if (cfg.grow_frames) st.size_bytes += cfg.mac_bytes + cfg.key_bytes;
        sec.size_after = st.size_bytes;
        sec.ed_before = sched->second.ed;
        st.min_offset = std::max(st.min_offset, cfg.sign_wcet);
        out.overlay.streams.push_back(sec);

        for (SecurityRole role : {SecurityRole::sign, SecurityRole::verify}) {
            SecurityTask t;
            t.stream = st.id;
            t.role = role;
            t.id = "tesla:" + st.id + ":" + to_string(role);
            t.host = role == SecurityRole::sign ? st.src : st.dst;
            t.level = st.criticality;
            t.wcet = role == SecurityRole::sign ? cfg.sign_wcet : cfg.verify_wcet;
            t.period = st.period;
            t.placed = s.find_node(t.host) != nullptr && t.wcet > 0;
            out.overlay.tasks.push_back(t);
        }
    }

    std::set<std::string> touched;
    for (const auto& t : out.overlay.tasks) {
        if (!t.placed) continue;
        ApplicationSpec app;
        app.id = t.id;
        app.node = t.host;
        app.level = t.level;
        app.task_count = 1;
        app.period = t.period;
        app.utilization = t.wcet / t.period;
        app.tasks = {TaskSpec{to_string(t.role), t.wcet, t.period, t.period}};
        out.secured.applications.push_back(app);
        touched.insert(t.host);
    }

    for (const auto& node : out.secured.nodes) {
        if (!touched.count(node.id)) continue;
        try {
            map_to_cores(out.secured.apps_on(node.id), node.cores);
        } catch (const Infeasible& e) {
            throw TaskPlacementInfeasible("node " + node.id + " cannot absorb its security tasks: " + e.what(),
                                          e.names());
        }
    }
    return out;
}

Micros secured_delay(const StreamTiming& st, Micros ed_before, const TeslaConfig& cfg) {
    check(cfg);
    if (!(st.period > 0)) throw std::invalid_argument("secured_delay: period must be positive");
    const Micros cycle = st.cycle > 0 ? st.cycle : st.period;
    const auto instances = std::max<long long>(1, std::llround(cycle / st.period));
    if (cfg.disclosure_delay == 0) return ed_before + cfg.verify_wcet;

    // the wait is evaluated on the network grid so that long cycles add no rounding noise
    const Ticks interval = to_ticks(cfg.key_interval);
    const Ticks period = to_ticks(st.period);
    const Ticks offset = to_ticks(st.offset);
    const Ticks ed = to_ticks(ed_before);
    Ticks worst_wait = 0;
    for (long long k = 0; k < instances; ++k) {
        const Ticks release = k * period;
        const Ticks disclosed = ((release + offset) / interval + cfg.disclosure_delay + 1) * interval;
        worst_wait = std::max(worst_wait, disclosed - (release + ed));
    }
    return ed_before + to_micros(worst_wait) + cfg.verify_wcet;
}

OverheadReport tesla_overhead_report(const std::map<std::string, Micros>& before,
                                     const std::map<std::string, Micros>& after) {
    for (const auto& [id, v] : before)
        if (!after.count(id)) throw MismatchedStreams("stream " + id + " missing from the secured delays");
    for (const auto& [id, v] : after)
        if (!before.count(id)) throw MismatchedStreams("stream " + id + " missing from the original delays");
    OverheadReport r;
    double sum = 0;
    for (const auto& [id, b] : before) {
        const Micros a = after.at(id);
        r.streams.push_back({id, b, a, a - b});
        sum += a - b;
    }
    r.average = r.streams.empty() ? 0.0 : sum / static_cast<double>(r.streams.size());
    return r;
}

TeslaOutcome run_tesla(const Scenario& s, const NetSchedule& ns, const TeslaConfig& cfg, const SolverOptions& opts) {
    auto applied = apply_tesla(s, ns, cfg);
    TeslaOutcome out;
    out.secured_net = synthesize_gcl(applied.secured, opts);
    std::map<std::string, Micros> before, after;
    for (auto& sec : applied.overlay.streams) {
        const auto& sched = out.secured_net.streams.at(sec.id);
        const StreamTiming timing{to_micros(sched.period), to_micros(sched.offset), to_micros(out.secured_net.cycle)};
        sec.ed_after = secured_delay(timing, sched.ed, cfg);
        before[sec.id] = sec.ed_before;
        after[sec.id] = sec.ed_after;
    }
    out.report = tesla_overhead_report(before, after);
    out.overlay = std::move(applied.overlay);
    out.secured = std::move(applied.secured);
    return out;
}

}  // namespace fogweaver
