#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fogweaver/netmodel.hpp"
#include "fogweaver/scenario.hpp"

namespace fogweaver {

// One gate-open interval on an egress port for one frame instance.
struct FrameWindow {
    std::size_t link = 0;  // index into Scenario::links
    std::string stream;
    int instance = 0;
    int hop = 0;  // position of `link` on the stream's route
    Ticks open = 0;
    Ticks close = 0;

    bool operator==(const FrameWindow&) const = default;
};

struct StreamMetrics {
    Micros ed = 0;
    Micros jitter = 0;
};

struct ScheduledStream {
    Ticks period = 0;
    Ticks offset = 0;  // injection offset after each release
    Micros ed = 0;
    Micros jitter = 0;
};

struct NetSchedule {
    Ticks cycle = 0;  // LCM of stream periods
    Ticks d_hop = 0;
    std::vector<FrameWindow> windows;
    std::map<std::string, ScheduledStream> streams;
    double objective = 0;  // sum of weight_base^criticality * offset_us
    std::uint64_t search_nodes = 0;
};

struct SolverOptions {
    std::uint64_t node_budget = 1'000'000;
};

// Places every stream at its earliest feasible zero-jitter offset, in
// (criticality desc, period asc, size desc) order with chronological
// backtracking. Throws Infeasible naming the streams that could not be placed.
NetSchedule synthesize_gcl(const Scenario& s, const SolverOptions& opts = {});

enum class NetIssue {
    malformed,
    missing,
    bounds,
    overlap,
    precedence,
    period_containment,
    deadline,
    jitter,
    metric,
};

using NetVerification = Report<NetIssue>;

// Interval-arithmetic check of a schedule against the scenario; shares no
// code with the solver.
NetVerification verify_net_schedule(const NetSchedule& ns, const Scenario& s, Exec exec = Exec::serial);

// ED and jitter recomputed from the windows. Throws StreamNotScheduled.
StreamMetrics stream_metrics(const NetSchedule& ns, const StreamSpec& st);

// Mean of (ed + jitter) / period over streams with criticality >= 3.
double qoc_proxy(const NetSchedule& ns, const Scenario& s);

const char* to_string(NetIssue issue);

}  // namespace fogweaver
