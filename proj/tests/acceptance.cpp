// One PASS/FAIL line per acceptance criterion; exit status is the number of
// failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "fogweaver/export.hpp"
#include "fogweaver/extensibility.hpp"
#include "fogweaver/pipeline.hpp"
#include "gen.hpp"
#include "oracle.hpp"
#include "util.hpp"

using namespace fogweaver;

namespace {

int failures = 0;

// Collects the reasons a criterion fails; an empty list passes.
struct Checks {
    std::vector<std::string> problems;
    std::ostringstream detail;

    void expect(bool ok, const std::string& what) {
        if (!ok) problems.push_back(what);
    }
};

void criterion(const char* id, const char* title, const std::function<void(Checks&)>& body) {
    Checks c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.problems.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = c.problems.empty();
    failures += !ok;
    std::printf("%s %s: %s (%.2fs) %s\n", id, ok ? "PASS" : "FAIL", title, secs, c.detail.str().c_str());
    for (const auto& p : c.problems) std::printf("    - %s\n", p.c_str());
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

NodeSchedule fixture_schedule(const std::string& name) {
    return node_schedule_from_json(Json::parse(fwtest::slurp(fwtest::fixture(name))));
}

}  // namespace

int main() {
    const Scenario uc1 = fwtest::uc1();

    criterion("AC1", "sensor stream delays 60/72/52/80/44 us", [&](Checks& c) {
        const auto t0 = std::chrono::steady_clock::now();
        const NetSchedule ns = synthesize_gcl(uc1);
        const std::pair<const char*, double> want[] = {
            {"S1 data", 60}, {"S2 data", 72}, {"S3 data", 52}, {"S4 data", 80}, {"S5 data", 44}};
        for (const auto& [id, ed] : want) {
            const double got = ns.streams.at(id).ed;
            c.detail << id << "=" << got << " ";
            c.expect(got == ed, std::string(id) + " has ED " + std::to_string(got));
        }
        c.expect(seconds_since(t0) < 10, "slower than 10 s");
    });

    criterion("AC2", "all uc1 streams scheduled, no miss, no jitter", [&](Checks& c) {
        const auto t0 = std::chrono::steady_clock::now();
        const NetSchedule ns = synthesize_gcl(uc1);
        const auto rep = verify_net_schedule(ns, uc1);
        for (const auto& e : rep.entries) c.expect(false, e.message);
        c.expect(ns.cycle == to_ticks(300000), "cycle is not 300 ms");
        c.expect(ns.streams.size() == 10, "not all streams scheduled");
        for (const auto& st : uc1.streams) {
            const auto m = stream_metrics(ns, st);
            c.expect(m.jitter == 0, st.id + " has jitter");
            c.expect(m.ed <= st.deadline, st.id + " misses its deadline");
        }
        c.detail << "streams=" << ns.streams.size() << " windows=" << ns.windows.size();
        c.expect(seconds_since(t0) < 30, "slower than 30 s");
    });

    criterion("AC3", "average core utilization near 57.2%, nodes verified", [&](Checks& c) {
        std::vector<NodeSchedule> all;
        for (auto& o : schedule_nodes(uc1)) {
            c.expect(o.schedule.has_value(), "node " + o.node + " infeasible: " + o.error);
            if (o.schedule) all.push_back(*o.schedule);
        }
        for (std::size_t i = 0; i < all.size(); ++i)
            for (const auto& e : verify_node_schedule(all[i]).entries) c.expect(false, e.message);
        const auto util = utilization_report(all);
        double table_c = 0;
        for (const auto& a : uc1.applications) table_c += a.utilization;
        c.detail << "average=" << util.average << " max=" << util.max.utilization << "@" << util.max.node << "/c"
                 << util.max.core;
        c.expect(all.size() == 5, "expected 5 node schedules");
        c.expect(util.per_core.size() == 10, "expected 10 cores");
        c.expect(std::abs(util.average - table_c / 10) < 1e-9, "average differs from sum(C)/10");
        c.expect(std::abs(util.average - 0.572) <= 0.005, "average more than 0.5 points from 57.2%");
        c.expect(util.max.utilization <= 1 + 1e-9, "a core is over 100%");
        c.expect(util.max.utilization >= util.average, "max below average");
    });

    criterion("AC4", "extensibility contrast on the E4 fixtures", [&](Checks& c) {
        const NodeSchedule base = fixture_schedule("e4_core2_base.json");
        const NodeSchedule opt = fixture_schedule("e4_core2_optimized.json");
        const auto dyn = parse_task_list(fwtest::slurp(fwtest::fixture("dynamic_apps.tasks")));
        c.expect(verify_node_schedule(base).ok() && verify_node_schedule(opt).ok(), "fixture fails verification");
        const double mb = ext_metric(base, 0), mo = ext_metric(opt, 0);
        c.detail << "metric base=" << mb << " optimized=" << mo;
        c.expect(mo < mb, "optimized metric is not lower");

        for (const auto* ns : {&base, &opt}) {
            const NodeSchedule copy = *ns;
            const auto rep = admit_dynamic(*ns, 0, dyn, 120000);
            c.expect(*ns == copy, "static schedule changed by admission");
            c.detail << (ns == &base ? " base" : " optimized") << " misses=" << rep.misses.size();
            if (ns == &base) c.expect(!rep.misses.empty(), "no miss on BASE");
            else c.expect(rep.misses.empty(), "misses on OPTIMIZED");
            // combined timeline: dynamic slices never overlap static ones
            for (const auto& d : rep.dynamic_slices) {
                const double off = std::floor(d.start / ns->major_frame) * ns->major_frame;
                for (const auto& sl : ns->slices) {
                    const bool overlap = d.start < sl.end + off - kTimeEps && sl.start + off < d.end - kTimeEps;
                    if (overlap) c.expect(false, "dynamic slice of " + d.task + " overlaps " + sl.task);
                }
            }
        }
    });

    criterion("AC5", "TESLA table mean 1720.6 us ~ 1723 us; overlay properties", [&](Checks& c) {
        const auto table = Json::parse(fwtest::slurp(fwtest::fixture("uc1_reported_ed.json")));
        std::map<std::string, Micros> before, after;
        for (const auto& row : table["streams"]) {
            before[row["id"]] = row["ed_us"].get<double>();
            after[row["id"]] = row["ed_tesla_us"].get<double>();
        }
        const auto r = tesla_overhead_report(before, after);
        c.detail << "table mean=" << r.average;
        c.expect(std::abs(r.average - 1720.6) < 1e-9, "table mean is not 1720.6");
        c.expect(std::abs(r.average - 1723) <= 3, "table mean more than 3 us from 1723");

        const NetSchedule ns = synthesize_gcl(uc1);
        for (int d : {1, 2, 3}) {
            TeslaConfig cfg;
            cfg.disclosure_delay = d;
            const auto out = run_tesla(uc1, ns, cfg);
            for (const auto& row : out.report.streams) {
                const double secured_ed = out.secured_net.streams.at(row.id).ed;
                c.expect(row.after >= row.before, row.id + " ed_after < ed_before");
                c.expect(row.after - secured_ed < (d + 1) * cfg.key_interval + cfg.verify_wcet,
                         row.id + " wait exceeds the disclosure bound");
            }
            std::map<std::string, int> per_stream;
            for (const auto& t : out.overlay.tasks) ++per_stream[t.stream];
            c.expect(per_stream.size() == uc1.streams.size(), "not every stream secured");
            for (const auto& [id, n] : per_stream) c.expect(n == 2, id + " has " + std::to_string(n) + " tasks");
            if (d == 1) c.detail << " model mean delta(d=1)=" << out.report.average;
        }
        std::mt19937_64 rng(12);
        for (int i = 0; i < 1000; ++i) {
            TeslaConfig cfg;
            cfg.key_interval = 100.0 * fwtest::pick(rng, 1, 30);
            cfg.disclosure_delay = fwtest::pick(rng, 1, 4);
            const double period = 1000.0 * fwtest::pick(rng, 1, 20);
            const double offset = fwtest::pick(rng, 0, 5000) / 10.0;
            const double ed = offset + fwtest::pick(rng, 1, 3000) / 10.0;
            const double a = secured_delay({period, offset, period * 3}, ed, cfg);
            c.expect(a >= ed && a - ed < (cfg.disclosure_delay + 1) * cfg.key_interval + cfg.verify_wcet,
                     "secured_delay bound violated");
        }
    });

    criterion("AC6", "every mutant class flagged, no false positives on 100 instances", [&](Checks& c) {
        const NetSchedule net = synthesize_gcl(uc1);
        auto net_flags = [&](NetSchedule ns, const Scenario& s, NetIssue kind, const std::function<void(NetSchedule&)>& f) {
            f(ns);
            return verify_net_schedule(ns, s).count(kind) > 0;
        };
        auto shift = [](NetSchedule& ns, const std::string& id, int hop_from, Ticks by) {
            for (auto& w : ns.windows)
                if (w.stream == id && w.hop >= hop_from) {
                    w.open += by;
                    w.close += by;
                }
        };
        c.expect(net_flags(net, uc1, NetIssue::overlap, [&](NetSchedule& ns) {
            const Ticks back = ns.streams["m2 state"].offset;
            shift(ns, "m2 state", 0, -back);
            ns.streams["m2 state"].offset = 0;
        }), "link overlap not flagged");
        c.expect(net_flags(net, uc1, NetIssue::precedence, [&](NetSchedule& ns) { shift(ns, "S6 data", 1, -3); }),
                 "precedence not flagged");
        Scenario tight = uc1;
        for (auto& st : tight.streams)
            if (st.id == "S4 data") st.deadline = 79;
        c.expect(net_flags(net, tight, NetIssue::deadline, [](NetSchedule&) {}), "deadline not flagged");
        c.expect(net_flags(net, uc1, NetIssue::period_containment, [&](NetSchedule& ns) {
            shift(ns, "S5 data", 0, to_ticks(9980));
            ns.streams["S5 data"].offset = to_ticks(9980);
        }), "period containment not flagged");

        const FogNodeSpec& e3 = *uc1.find_node("E3");
        const NodeSchedule node = synthesize_node_schedule(e3, map_to_cores(uc1.apps_on("E3"), e3.cores));
        auto node_flags = [&](NodeIssue kind, const std::function<void(NodeSchedule&)>& f) {
            NodeSchedule ns = node;
            f(ns);
            return verify_node_schedule(ns).count(kind) > 0;
        };
        c.expect(node_flags(NodeIssue::core_overlap, [](NodeSchedule& ns) {
            ns.slices[1].start -= 10;
            ns.slices[1].end -= 10;
        }), "core overlap not flagged");
        c.expect(node_flags(NodeIssue::isolation, [](NodeSchedule& ns) {
            for (auto& sl : ns.slices)
                for (const auto& p : ns.partitions)
                    if (p.core == sl.core && p.criticality != sl.level) {
                        sl.partition = p.id;
                        return;
                    }
        }), "isolation not flagged");
        c.expect(node_flags(NodeIssue::containment, [](NodeSchedule& ns) { ns.partitions[0].windows[0].end -= 1; }),
                 "window containment not flagged");

        std::mt19937_64 rng(6);
        int feasible = 0, attempts = 0;
        while (feasible < 100 && attempts < 1000) {
            ++attempts;
            Scenario s = fwtest::random_streams(rng, fwtest::pick(rng, 1, 5), fwtest::pick(rng, 0, 1));
            s.applications.clear();
            for (int k = fwtest::pick(rng, 1, 4); k > 0; --k) {
                ApplicationSpec a{"app" + std::to_string(k), "E", fwtest::pick(rng, 0, 4), 1,
                                  5000.0 * fwtest::pick(rng, 1, 4), 0.05 * fwtest::pick(rng, 1, 9), {}};
                s.applications.push_back(a);
            }
            NetSchedule ns;
            std::vector<NodeSchedule> nodes;
            try {
                ns = synthesize_gcl(s);
                for (auto& o : schedule_nodes(s)) {
                    if (!o.schedule) throw Infeasible(o.error, {});
                    nodes.push_back(*o.schedule);
                }
            } catch (const Infeasible&) {
                continue;
            }
            ++feasible;
            for (const auto& e : verify_net_schedule(ns, s).entries) c.expect(false, "false positive: " + e.message);
            for (const auto& n : nodes)
                for (const auto& e : verify_node_schedule(n).entries) c.expect(false, "false positive: " + e.message);
        }
        c.detail << "feasible instances=" << feasible;
        c.expect(feasible == 100, "could not generate 100 feasible instances");
    });

    criterion("AC7", "solver complete on small instances; EDF never infeasible at U<=1", [&](Checks& c) {
        std::mt19937_64 rng(77);
        int agree = 0, brute_infeasible = 0;
        for (int i = 0; i < 400; ++i) {
            const Scenario s = fwtest::oracle_instance(rng);
            const bool brute = fwtest::GclOracle(s).feasible();
            bool solved = true;
            try {
                const NetSchedule ns = synthesize_gcl(s);
                c.expect(verify_net_schedule(ns, s).ok(), "solver output fails verification");
            } catch (const Infeasible&) {
                solved = false;
            }
            if (brute && !solved) c.expect(false, "solver misses a brute-force solution in case " + std::to_string(i));
            agree += brute == solved;
            brute_infeasible += !brute;
        }
        int edf_ok = 0;
        for (int i = 0; i < 200; ++i) {
            const ApplicationSpec app = fwtest::random_edf_app(rng);
            try {
                const NodeSchedule ns = synthesize_node_schedule({"N", 1, 1}, map_to_cores({app}, 1));
                edf_ok += verify_node_schedule(ns).ok();
            } catch (const Infeasible& e) {
                c.expect(false, std::string("EDF reported infeasible: ") + e.what());
            }
        }
        c.expect(edf_ok == 200, "EDF schedules failed verification");
        c.detail << "net agree=" << agree << "/400 (brute infeasible " << brute_infeasible << ") edf=" << edf_ok << "/200";
    });

    criterion("AC8", "identical seeds give byte-identical reports", [&](Checks& c) {
        for (std::uint64_t seed : {0u, 1u, 12345u}) {
            PipelineOptions opts;
            opts.seed = seed;
            const std::string a = run_pipeline(uc1, opts).report.dump(2);
            const std::string b = run_pipeline(uc1, opts).report.dump(2);
            c.expect(a == b, "seed " + std::to_string(seed) + " reports differ");
            opts.exec = Exec::serial;
            c.expect(run_pipeline(uc1, opts).report.dump(2) == a, "serial and parallel reports differ");
        }
        c.detail << "digest=" << scenario_digest(uc1);
    });

    std::printf("%d criteria failed\n", failures);
    return failures;
}
