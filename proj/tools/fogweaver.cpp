#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fogweaver/export.hpp"
#include "fogweaver/gantt.hpp"
#include "fogweaver/pipeline.hpp"

namespace fs = std::filesystem;
using namespace fogweaver;

namespace {

struct Failure {
    int code;
    std::string message;
};

struct Common {
    std::string input;
    std::string output;
    std::string gantt_dir;
    std::string format = "svg";
    std::optional<double> d_hop;
    std::optional<std::uint64_t> seed;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{kExitIo, "cannot read " + path};
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw Failure{kExitIo, "cannot write " + path.string()};
}

void emit(const Common& c, const Json& j) {
    const std::string text = j.dump(2) + "\n";
    if (c.output.empty()) std::cout << text;
    else write_file(c.output, text);
}

GanttFormat gantt_format(const Common& c) { return c.format == "ascii" ? GanttFormat::ascii : GanttFormat::svg; }

void emit_gantt(const Common& c, const std::string& name, const std::string& doc) {
    if (c.gantt_dir.empty()) return;
    write_file(fs::path(c.gantt_dir) / (name + (c.format == "ascii" ? ".txt" : ".svg")), doc);
}

Scenario load_scenario(const Common& c) {
    const std::string text = read_file(c.input);
    Scenario s;
    try {
        s = parse_scenario(text);
    } catch (const Error& e) {
        throw Failure{kExitValidation, c.input + ":" + e.what()};
    }
    if (c.d_hop) s.params.d_hop = *c.d_hop;
    if (c.seed) s.params.solver_seed = *c.seed;
    const auto report = validate(s);
    if (!report.ok()) {
        std::string msg;
        for (const auto& e : report.entries) msg += c.input + ": " + to_string(e.kind) + ": " + e.message + "\n";
        msg.pop_back();
        throw Failure{kExitValidation, msg};
    }
    return s;
}

bool is_json(const std::string& path) { return fs::path(path).extension() == ".json"; }

// A node schedule either read from JSON or synthesized from a scenario.
std::vector<NodeSchedule> load_node_schedules(const Common& c, const std::string& node) {
    if (is_json(c.input)) {
        try {
            const auto j = Json::parse(read_file(c.input));
            auto ns = node_schedule_from_json(j);
            if (!node.empty() && ns.node != node) throw Failure{kExitValidation, "schedule is for node " + ns.node};
            const auto check = verify_node_schedule(ns);
            if (!check.ok()) throw Failure{kExitValidation, c.input + ": " + check.entries.front().message};
            return {ns};
        } catch (const nlohmann::json::exception& e) {
            throw Failure{kExitValidation, c.input + ": " + e.what()};
        } catch (const Error& e) {
            throw Failure{kExitValidation, c.input + ": " + e.what()};
        }
    }
    const Scenario s = load_scenario(c);
    if (!node.empty() && !s.find_node(node)) throw Failure{kExitValidation, "no fog node " + node};
    std::vector<NodeSchedule> out;
    for (auto& o : schedule_nodes(s)) {
        if (!node.empty() && o.node != node) continue;
        if (!o.schedule) throw Failure{kExitInfeasible, "node " + o.node + ": " + o.error};
        out.push_back(std::move(*o.schedule));
    }
    return out;
}

NetSchedule schedule_net(const Scenario& s) {
    try {
        return synthesize_gcl(s);
    } catch (const Infeasible& e) {
        std::string msg = std::string("network: ") + e.what();
        for (const auto& n : e.names()) msg += "\n  unplaced " + n;
        throw Failure{kExitInfeasible, msg};
    }
}

void add_common(CLI::App* sub, Common& c, bool scenario_flags = true) {
    sub->add_option("input", c.input, "scenario file")->required();
    sub->add_option("-o,--output", c.output, "output path (default stdout)");
    if (scenario_flags) {
        sub->add_option("--d-hop", c.d_hop, "per-hop switch latency in us");
        sub->add_option("--seed", c.seed, "solver seed");
    }
    sub->add_option("--gantt", c.gantt_dir, "directory for Gantt charts");
    sub->add_option("--format", c.format, "Gantt format")->check(CLI::IsMember({"svg", "ascii"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fogweaver: offline TSN and fog-node configuration synthesis"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    Common c;

    auto* validate_cmd = app.add_subcommand("validate", "parse and check a scenario");
    add_common(validate_cmd, c);

    auto* net_cmd = app.add_subcommand("net-schedule", "synthesize the gate control lists");
    add_common(net_cmd, c);

    std::string node_id;
    auto* node_cmd = app.add_subcommand("node-schedule", "map and schedule fog-node tasks");
    add_common(node_cmd, c);
    node_cmd->add_option("--node", node_id, "only this fog node");

    bool optimize = false;
    std::uint64_t opt_seed = 0;
    std::string emit_schedule;
    auto* ext_cmd = app.add_subcommand("extensibility", "idle-time metrics, optionally optimized");
    add_common(ext_cmd, c);
    ext_cmd->add_option("--node", node_id, "only this fog node");
    ext_cmd->add_flag("--optimize", optimize, "run the local search");
    ext_cmd->add_option("--opt-seed", opt_seed, "visiting-order seed of the local search");
    ext_cmd->add_option("--emit-schedule", emit_schedule, "write the (optimized) node schedule JSON here");

    std::string dynamic_path;
    int core = 0;
    double horizon_ms = 0;
    auto* admit_cmd = app.add_subcommand("admit", "simulate dynamic tasks in the idle time of one core");
    add_common(admit_cmd, c);
    admit_cmd->add_option("--dynamic", dynamic_path, "task list file")->required();
    admit_cmd->add_option("--node", node_id, "fog node")->required();
    admit_cmd->add_option("--core", core, "core index")->required();
    admit_cmd->add_option("--horizon", horizon_ms, "simulated time in ms")->required();

    TeslaConfig tesla;
    auto* tesla_cmd = app.add_subcommand("tesla", "authentication overlay and delay overhead");
    add_common(tesla_cmd, c);
    tesla_cmd->add_option("--interval", tesla.key_interval, "key interval in us");
    tesla_cmd->add_option("--disclosure", tesla.disclosure_delay, "key disclosure delay in intervals");
    tesla_cmd->add_option("--sign-wcet", tesla.sign_wcet, "MAC generation time in us");
    tesla_cmd->add_option("--verify-wcet", tesla.verify_wcet, "MAC verification time in us");
    bool no_grow = false;
    tesla_cmd->add_flag("--no-grow", no_grow, "keep frame sizes unchanged");

    auto* pipe_cmd = app.add_subcommand("pipeline", "run every stage and write one report");
    add_common(pipe_cmd, c);
    pipe_cmd->add_option("--interval", tesla.key_interval, "key interval in us");
    pipe_cmd->add_option("--disclosure", tesla.disclosure_delay, "key disclosure delay in intervals");

    CLI11_PARSE(app, argc, argv);
    tesla.grow_frames = !no_grow;

    try {
        if (validate_cmd->parsed()) {
            const std::string text = read_file(c.input);
            Json out{{"file", c.input}};
            int code = kExitOk;
            try {
                auto s = parse_scenario(text);
                const auto report = validate(s);
                for (const auto& e : report.entries) std::cerr << c.input << ": " << to_string(e.kind) << ": " << e.message << "\n";
                out["valid"] = report.ok();
                out["issues"] = report_to_json(report);
                if (!report.ok()) code = kExitValidation;
            } catch (const Error& e) {
                std::cerr << c.input << ":" << e.what() << "\n";
                out["valid"] = false;
                out["issues"] = Json::array({{{"kind", "Syntax"}, {"message", e.what()}}});
                code = kExitValidation;
            }
            emit(c, out);
            return code;
        }
        if (net_cmd->parsed()) {
            const Scenario s = load_scenario(c);
            const NetSchedule ns = schedule_net(s);
            const auto check = verify_net_schedule(ns, s);
            Json out = net_summary_json(ns, s);
            out["verified"] = check.ok();
            out["gcl"] = gcl_to_json(ns, s);
            emit(c, out);
            emit_gantt(c, "net", gantt_net(ns, s, gantt_format(c)));
            return check.ok() ? kExitOk : kExitInfeasible;
        }
        if (node_cmd->parsed()) {
            const auto schedules = load_node_schedules(c, node_id);
            Json out = Json::array();
            for (const auto& ns : schedules) {
                out.push_back(node_schedule_to_json(ns));
                emit_gantt(c, ns.node, gantt_node(ns, gantt_format(c)));
            }
            emit(c, node_id.empty() ? out : out.front());
            return kExitOk;
        }
        if (ext_cmd->parsed()) {
            if (!emit_schedule.empty() && node_id.empty() && !is_json(c.input))
                throw Failure{kExitValidation, "--emit-schedule needs --node"};
            Json out = Json::array();
            for (const auto& ns : load_node_schedules(c, node_id)) {
                const NodeSchedule result = optimize ? optimize_extensibility(ns, {200'000, opt_seed}) : ns;
                Json metrics = Json::array();
                for (int k = 0; k < ns.cores; ++k)
                    metrics.push_back({{"core", k}, {"before", ext_metric(ns, k)}, {"after", ext_metric(result, k)}});
                out.push_back({{"node", ns.node}, {"verified", verify_node_schedule(result).ok()}, {"metrics", metrics}});
                if (!emit_schedule.empty()) write_file(emit_schedule, node_schedule_to_json(result).dump(2) + "\n");
                emit_gantt(c, ns.node + (optimize ? ".opt" : ""), gantt_node(result, gantt_format(c)));
            }
            emit(c, out);
            return kExitOk;
        }
        if (admit_cmd->parsed()) {
            std::vector<TaskSpec> dynamic;
            try {
                dynamic = parse_task_list(read_file(dynamic_path));
            } catch (const Error& e) {
                throw Failure{kExitValidation, dynamic_path + ":" + e.what()};
            }
            const auto schedules = load_node_schedules(c, node_id);
            if (schedules.empty()) throw Failure{kExitValidation, "no schedule for node " + node_id};
            const NodeSchedule& ns = schedules.front();
            if (core < 0 || core >= ns.cores) throw Failure{kExitValidation, "node " + ns.node + " has no core " + std::to_string(core)};
            AdmissionReport rep;
            try {
                rep = admit_dynamic(ns, core, dynamic, horizon_ms * 1000.0);
            } catch (const std::invalid_argument& e) {
                throw Failure{kExitValidation, e.what()};
            }
            emit(c, admission_to_json(rep));
            GanttMarks marks{rep.dynamic_slices, rep.misses, core, 0};
            emit_gantt(c, ns.node + ".admit", gantt_node(ns, gantt_format(c), marks));
            return kExitOk;
        }
        if (tesla_cmd->parsed()) {
            const Scenario s = load_scenario(c);
            const NetSchedule ns = schedule_net(s);
            TeslaOutcome outcome;
            try {
                outcome = run_tesla(s, ns, tesla);
            } catch (const Infeasible& e) {
                throw Failure{kExitInfeasible, std::string("tesla: ") + e.what()};
            }
            Json out = overhead_to_json(outcome.report);
            out["overlay"] = overlay_to_json(outcome.overlay);
            emit(c, out);
            emit_gantt(c, "net.secured", gantt_net(outcome.secured_net, outcome.secured, gantt_format(c)));
            return kExitOk;
        }
        if (pipe_cmd->parsed()) {
            const std::string text = read_file(c.input);
            Scenario s;
            try {
                s = parse_scenario(text);
            } catch (const Error& e) {
                throw Failure{kExitValidation, c.input + ":" + e.what()};
            }
            PipelineOptions opts;
            opts.d_hop = c.d_hop;
            opts.seed = c.seed;
            opts.tesla = tesla;
            auto r = run_pipeline(s, opts);
            for (const auto& d : r.diagnostics) std::cerr << c.input << ": " << d << "\n";
            emit(c, r.report);
            if (r.net) emit_gantt(c, "net", gantt_net(*r.net, r.scenario, gantt_format(c)));
            for (const auto& ns : r.nodes) emit_gantt(c, ns.node, gantt_node(ns, gantt_format(c)));
            for (const auto& ns : r.optimized) emit_gantt(c, ns.node + ".opt", gantt_node(ns, gantt_format(c)));
            return r.exit_code;
        }
    } catch (const Failure& f) {
        std::cerr << f.message << "\n";
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    }
    return kExitOk;
}
