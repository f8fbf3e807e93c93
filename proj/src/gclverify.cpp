#include <algorithm>
#include <map>
#include <sstream>

#include "fogweaver/gclsched.hpp"

namespace fogweaver {

const char* to_string(NetIssue issue) {
    switch (issue) {
        case NetIssue::malformed: return "Malformed";
        case NetIssue::missing: return "Missing";
        case NetIssue::bounds: return "Bounds";
        case NetIssue::overlap: return "Overlap";
        case NetIssue::precedence: return "Precedence";
        case NetIssue::period_containment: return "PeriodContainment";
        case NetIssue::deadline: return "Deadline";
        case NetIssue::jitter: return "Jitter";
        case NetIssue::metric: return "Metric";
    }
    return "?";
}

namespace {

std::string us(Ticks t) {
    std::ostringstream o;
    o << to_micros(t) << "us";
    return o.str();
}

// Everything the verifier knows about a stream comes from the scenario; only
// the offset is read from the schedule under test.
struct Expected {
    const StreamSpec* spec = nullptr;
    std::vector<std::size_t> links;
    Ticks period = 0;
    Ticks deadline = 0;
    Ticks tx = 0;
    bool routable = true;
};

Expected expected_for(const Scenario& s, const StreamSpec& st) {
    Expected e;
    e.spec = &st;
    e.period = to_ticks(st.period);
    e.deadline = to_ticks(st.deadline);
    std::int64_t slowest = 0;
    for (std::size_t i = 0; i + 1 < st.route.size(); ++i) {
        auto idx = s.link_index(st.route[i], st.route[i + 1]);
        if (!idx) {
            e.routable = false;
            return e;
        }
        e.links.push_back(*idx);
        const auto rate = s.links[*idx].rate_bps;
        slowest = slowest == 0 ? rate : std::min(slowest, rate);
    }
    e.routable = !e.links.empty() && slowest > 0;
    if (e.routable) e.tx = (static_cast<Ticks>(st.size_bytes) * 8 * 10'000'000 + slowest - 1) / slowest;
    return e;
}

void check_link(const std::vector<const FrameWindow*>& on_link, const Scenario& s, NetVerification& out) {
    for (std::size_t i = 1; i < on_link.size(); ++i) {
        const FrameWindow& a = *on_link[i - 1];
        const FrameWindow& b = *on_link[i];
        if (b.open < a.close)
            out.add(NetIssue::overlap, "link " + s.links[a.link].name() + ": '" + a.stream + "'#" +
                                           std::to_string(a.instance) + " [" + us(a.open) + "," + us(a.close) +
                                           ") overlaps '" + b.stream + "'#" + std::to_string(b.instance) + " [" +
                                           us(b.open) + "," + us(b.close) + ")");
    }
}

void check_stream(const Expected& e, const NetSchedule& ns, const std::vector<const FrameWindow*>& mine,
                  NetVerification& out) {
    const StreamSpec& st = *e.spec;
    const std::string who = "stream '" + st.id + "'";
    auto sched = ns.streams.find(st.id);
    if (sched == ns.streams.end()) {
        out.add(NetIssue::missing, who + " has no offset in the schedule");
        return;
    }
    if (!e.routable) {
        out.add(NetIssue::malformed, who + " route does not resolve to links");
        return;
    }
    const Ticks phi = sched->second.offset;
    const Ticks hops = static_cast<Ticks>(e.links.size());
    if (ns.cycle <= 0 || e.period <= 0 || ns.cycle % e.period != 0) {
        out.add(NetIssue::malformed, who + " period does not divide the cycle");
        return;
    }
    const Ticks instances = ns.cycle / e.period;

    if (phi < 0 || phi + hops * ns.d_hop + e.tx > e.period)
        out.add(NetIssue::period_containment, who + " offset " + us(phi) + " plus route span does not fit its period");

    // arrival per instance, from the last-hop window
    std::vector<int> seen(static_cast<std::size_t>(instances * hops), 0);
    std::vector<Ticks> arrival(static_cast<std::size_t>(instances), -1);
    for (const FrameWindow* w : mine) {
        if (w->instance < 0 || w->instance >= instances || w->hop < 0 || w->hop >= hops) {
            out.add(NetIssue::malformed, who + " window with instance " + std::to_string(w->instance) + " hop " +
                                             std::to_string(w->hop) + " outside the cycle/route");
            continue;
        }
        if (e.links[static_cast<std::size_t>(w->hop)] != w->link)
            out.add(NetIssue::malformed, who + " window at hop " + std::to_string(w->hop) + " is on the wrong link");
        ++seen[static_cast<std::size_t>(w->instance * hops + w->hop)];
        if (w->open < 0 || w->open >= w->close || w->close > ns.cycle)
            out.add(NetIssue::bounds, who + "#" + std::to_string(w->instance) + " window outside [0, cycle)");
        if (w->close - w->open != e.tx)
            out.add(NetIssue::bounds, who + "#" + std::to_string(w->instance) + " window length " +
                                          us(w->close - w->open) + " != transmission time " + us(e.tx));
        const Ticks want = w->instance * e.period + phi + w->hop * ns.d_hop;
        if (w->open != want)
            out.add(NetIssue::precedence, who + "#" + std::to_string(w->instance) + " hop " + std::to_string(w->hop) +
                                              " opens at " + us(w->open) + ", expected " + us(want));
        if (w->hop == hops - 1) arrival[static_cast<std::size_t>(w->instance)] = w->close + ns.d_hop;
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (seen[i] != 1)
            out.add(seen[i] == 0 ? NetIssue::missing : NetIssue::malformed,
                    who + "#" + std::to_string(static_cast<Ticks>(i) / hops) + " hop " +
                        std::to_string(static_cast<Ticks>(i) % hops) + " has " + std::to_string(seen[i]) + " windows");

    Ticks ed_max = -1;
    Ticks ed_min = -1;
    for (Ticks k = 0; k < instances; ++k) {
        const Ticks arr = arrival[static_cast<std::size_t>(k)];
        if (arr < 0) continue;
        const Ticks ed = arr - k * e.period;
        if (ed > e.deadline)
            out.add(NetIssue::deadline, who + "#" + std::to_string(k) + " delay " + us(ed) + " exceeds deadline " +
                                            us(e.deadline));
        ed_max = ed_max < 0 ? ed : std::max(ed_max, ed);
        ed_min = ed_min < 0 ? ed : std::min(ed_min, ed);
    }
    if (ed_max < 0) return;
    if (ed_max != ed_min) out.add(NetIssue::jitter, who + " jitter " + us(ed_max - ed_min));
    if (std::abs(sched->second.ed - to_micros(ed_max)) > kTimeEps ||
        std::abs(sched->second.jitter - to_micros(ed_max - ed_min)) > kTimeEps)
        out.add(NetIssue::metric, who + " recorded ED/jitter disagree with its windows");
}

template <class F>
void for_each_index(std::size_t n, Exec exec, F&& body) {
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::size_t i = 0; i < n; ++i) body(i);
    } else {
        for (std::size_t i = 0; i < n; ++i) body(i);
    }
}

}  // namespace

NetVerification verify_net_schedule(const NetSchedule& ns, const Scenario& s, Exec exec) {
    NetVerification out;

    std::map<std::string, std::size_t> stream_pos;
    for (std::size_t i = 0; i < s.streams.size(); ++i) stream_pos[s.streams[i].id] = i;

    std::vector<std::vector<const FrameWindow*>> by_link(s.links.size());
    std::vector<std::vector<const FrameWindow*>> by_stream(s.streams.size());
    for (const auto& w : ns.windows) {
        auto it = stream_pos.find(w.stream);
        if (it == stream_pos.end() || w.link >= s.links.size()) {
            out.add(NetIssue::malformed, "window for unknown stream/link '" + w.stream + "'");
            continue;
        }
        by_link[w.link].push_back(&w);
        by_stream[it->second].push_back(&w);
    }
    for (const auto& [id, _] : ns.streams)
        if (!stream_pos.count(id)) out.add(NetIssue::malformed, "schedule names unknown stream '" + id + "'");

    std::vector<NetVerification> link_reports(by_link.size());
    for_each_index(by_link.size(), exec, [&](std::size_t l) {
        auto& v = by_link[l];
        std::sort(v.begin(), v.end(), [](const FrameWindow* a, const FrameWindow* b) {
            return std::tie(a->open, a->close, a->stream) < std::tie(b->open, b->close, b->stream);
        });
        check_link(v, s, link_reports[l]);
    });

    std::vector<NetVerification> stream_reports(s.streams.size());
    for_each_index(s.streams.size(), exec, [&](std::size_t i) {
        check_stream(expected_for(s, s.streams[i]), ns, by_stream[i], stream_reports[i]);
    });

    for (auto* group : {&link_reports, &stream_reports})
        for (auto& r : *group)
            for (auto& e : r.entries) out.entries.push_back(std::move(e));
    return out;
}

StreamMetrics stream_metrics(const NetSchedule& ns, const StreamSpec& st) {
    std::map<int, std::pair<Ticks, Ticks>> per_instance;  // instance -> (release, last close)
    const Ticks period = to_ticks(st.period);
    for (const auto& w : ns.windows) {
        if (w.stream != st.id) continue;
        auto& slot = per_instance.try_emplace(w.instance, w.instance * period, w.close).first->second;
        slot.second = std::max(slot.second, w.close);
    }
    if (per_instance.empty()) throw StreamNotScheduled("stream '" + st.id + "' is not in the schedule");
    Ticks hi = 0;
    Ticks lo = 0;
    bool first = true;
    for (const auto& [k, rel_close] : per_instance) {
        const Ticks ed = rel_close.second + ns.d_hop - rel_close.first;
        hi = first ? ed : std::max(hi, ed);
        lo = first ? ed : std::min(lo, ed);
        first = false;
    }
    return {to_micros(hi), to_micros(hi - lo)};
}

double qoc_proxy(const NetSchedule& ns, const Scenario& s) {
    double sum = 0;
    int n = 0;
    for (const auto& st : s.streams) {
        if (st.criticality < 3) continue;
        const auto m = stream_metrics(ns, st);
        sum += (m.ed + m.jitter) / st.period;
        ++n;
    }
    return n == 0 ? 0.0 : sum / n;
}

}  // namespace fogweaver
