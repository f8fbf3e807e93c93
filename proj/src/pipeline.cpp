#include "fogweaver/pipeline.hpp"

#include <cstdio>

namespace fogweaver {

std::string scenario_digest(const Scenario& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : print_scenario(s)) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

Json infeasible(const std::string& error, const std::vector<std::string>& names) {
    return {{"infeasible", true}, {"error", error}, {"unplaced", names}};
}

}  // namespace

PipelineResult run_pipeline(const Scenario& input, const PipelineOptions& opts) {
    PipelineResult r;
    r.scenario = input;
    if (opts.d_hop) r.scenario.params.d_hop = *opts.d_hop;
    if (opts.seed) r.scenario.params.solver_seed = *opts.seed;
    const Scenario& s = r.scenario;

    Json& rep = r.report;
    rep = {{"version", kVersion},
           {"seed", s.params.solver_seed},
           {"scenario", scenario_digest(s)},
           {"validation", Json::array()},
           {"net", nullptr},
           {"nodes", Json::array()},
           {"utilization", nullptr},
           {"extensibility", Json::array()},
           {"tesla", nullptr}};

    const auto validation = validate(s);
    if (!validation.ok()) {
        rep["validation"] = report_to_json(validation);
        for (const auto& e : validation.entries) r.diagnostics.push_back(e.message);
        r.exit_code = kExitValidation;
        return r;
    }

    try {
        r.net = synthesize_gcl(s, opts.solver);
    } catch (const Infeasible& e) {
        rep["net"] = infeasible(e.what(), e.names());
        r.diagnostics.push_back(std::string("network: ") + e.what());
        r.exit_code = kExitInfeasible;
        return r;
    }
    {
        const auto check = verify_net_schedule(*r.net, s, opts.exec);
        Json net = net_summary_json(*r.net, s);
        net["verified"] = check.ok();
        net["issues"] = report_to_json(check);
        rep["net"] = std::move(net);
        if (!check.ok()) {
            r.diagnostics.push_back("network schedule failed verification");
            r.exit_code = kExitInfeasible;
            return r;
        }
    }

    const auto outcomes = schedule_nodes(s, opts.exec);
    for (const auto& outcome : outcomes)
        if (outcome.schedule) r.nodes.push_back(*outcome.schedule);
    const auto checks = verify_nodes(r.nodes, opts.exec);
    bool nodes_ok = true;
    std::size_t next = 0;
    for (const auto& outcome : outcomes) {
        if (!outcome.schedule) {
            rep["nodes"].push_back({{"node", outcome.node},
                                    {"infeasible", true},
                                    {"error", outcome.error},
                                    {"unplaced", outcome.unplaced}});
            r.diagnostics.push_back("node " + outcome.node + ": " + outcome.error);
            nodes_ok = false;
            continue;
        }
        const auto& ns = r.nodes[next];
        const auto& check = checks[next++];
        nodes_ok = nodes_ok && check.ok();
        rep["nodes"].push_back({{"node", ns.node},
                                {"cores", ns.cores},
                                {"major_frame_us", ns.major_frame},
                                {"tasks", ns.tasks.size()},
                                {"per_core_utilization", ns.per_core_utilization},
                                {"verified", check.ok()},
                                {"issues", report_to_json(check)}});
    }
    if (!nodes_ok) {
        r.exit_code = kExitInfeasible;
        return r;
    }
    const auto util = utilization_report(r.nodes);
    rep["utilization"] = {{"average", util.average},
                          {"max", {{"node", util.max.node}, {"core", util.max.core}, {"utilization", util.max.utilization}}}};

    for (const auto& ns : r.nodes) {
        r.optimized.push_back(optimize_extensibility(ns, opts.optimizer));
        const auto& opt = r.optimized.back();
        const bool verified = verify_node_schedule(opt).ok();
        for (int c = 0; c < ns.cores; ++c)
            rep["extensibility"].push_back({{"node", ns.node},
                                            {"core", c},
                                            {"before", ext_metric(ns, c)},
                                            {"after", ext_metric(opt, c)},
                                            {"verified", verified}});
    }

    try {
        r.tesla = run_tesla(s, *r.net, opts.tesla, opts.solver);
        rep["tesla"] = overhead_to_json(r.tesla->report);
        rep["tesla"]["security_tasks"] = r.tesla->overlay.tasks.size();
    } catch (const Infeasible& e) {
        rep["tesla"] = infeasible(e.what(), e.names());
        r.diagnostics.push_back(std::string("tesla: ") + e.what());
        r.exit_code = kExitInfeasible;
    }
    return r;
}

}  // namespace fogweaver
