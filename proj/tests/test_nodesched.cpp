#include <doctest.h>

#include <map>
#include <random>

#include "fogweaver/nodesched.hpp"
#include "gen.hpp"
#include "oracle.hpp"
#include "util.hpp"

using namespace fogweaver;

namespace {

NodeSchedule schedule_of(const Scenario& s, const std::string& node) {
    const FogNodeSpec& n = *s.find_node(node);
    return synthesize_node_schedule(n, map_to_cores(s.apps_on(node), n.cores));
}

Scenario single_node(std::vector<ApplicationSpec> apps, int cores) {
    Scenario s;
    s.nodes.push_back({"N", cores, 1});
    for (auto& a : apps) {
        a.node = "N";
        s.applications.push_back(a);
    }
    return s;
}

}  // namespace

TEST_CASE("single task") {
    const Scenario s = single_node({{"a", "", 2, 1, 10000, 0.35, {}}}, 1);
    const NodeSchedule ns = schedule_of(s, "N");
    CHECK(ns.major_frame == doctest::Approx(10000));
    REQUIRE(ns.partitions.size() == 1);
    REQUIRE(ns.slices.size() == 1);
    CHECK(ns.slices[0].start == 0);
    CHECK(ns.slices[0].end == doctest::Approx(3500));
    CHECK(ns.partitions[0].windows == std::vector<TimeWindow>{{0, 3500}});
    CHECK(ns.per_core_utilization[0] == doctest::Approx(0.35));
    CHECK(verify_node_schedule(ns).ok());
}

TEST_CASE("partitions per level") {
    const auto parts = assign_partitions({{"a", "N", 1, 1, 1000, 0.1, {}},
                                          {"b", "N", 3, 1, 1000, 0.1, {}},
                                          {"c", "N", 1, 1, 1000, 0.1, {}}});
    REQUIRE(parts.size() == 2);
    CHECK(parts[0].criticality == 3);
    CHECK(parts[1].criticality == 1);
    CHECK(assign_partitions({}).empty());
}

TEST_CASE("overload is infeasible") {
    const std::vector<ApplicationSpec> apps{{"a", "N", 1, 1, 1000, 0.6, {}}, {"b", "N", 1, 1, 1000, 0.6, {}}};
    try {
        map_to_cores(apps, 1);
        FAIL("expected Infeasible");
    } catch (const Infeasible& e) {
        CHECK(e.names() == std::vector<std::string>{"b/t1"});
    }
    CHECK(map_to_cores(apps, 2).size() == 2);
    CHECK_THROWS_AS(map_to_cores(apps, 0), std::invalid_argument);

    // fits by utilization, misses under EDF because deadline < period
    ApplicationSpec tight{"c", "N", 1, 1, 1000, 0.5, {{"x", 500, 1000, 600}, {"y", 0, 1000, 1000}}};
    tight.tasks[1].wcet = 500;
    tight.utilization = 1.0;
    tight.task_count = 2;
    tight.tasks[1].deadline = 600;
    const FogNodeSpec n{"N", 1, 1};
    CHECK_THROWS_AS(synthesize_node_schedule(n, map_to_cores({tight}, 1)), Infeasible);
}

TEST_CASE("uc1 nodes") {
    const Scenario s = fwtest::uc1();
    std::vector<NodeSchedule> all;
    for (const auto& n : s.nodes) {
        const NodeSchedule ns = schedule_of(s, n.id);
        const auto rep = verify_node_schedule(ns);
        CHECK_MESSAGE(rep.ok(), n.id);
        for (const auto& e : rep.entries) MESSAGE(e.message);
        for (double u : ns.per_core_utilization) CHECK(u <= 1.0 + 1e-9);
        all.push_back(ns);
    }
    const NodeSchedule e3 = all[2];
    CHECK(e3.node == "E3");
    CHECK(e3.major_frame == doctest::Approx(30000));
    double e3_load = 0;
    for (double u : e3.per_core_utilization) e3_load += u;
    CHECK(e3_load == doctest::Approx(0.35 + 0.59 + 0.26 + 0.28));

    const auto util = utilization_report(all);
    CHECK(util.per_core.size() == 10);
    CHECK(util.average == doctest::Approx(0.574));
    CHECK(util.max.utilization >= util.average);
    CHECK(util.max.utilization <= 1.0 + 1e-9);
}

TEST_CASE("utilization report") {
    NodeSchedule idle;
    idle.node = "X";
    idle.cores = 1;
    idle.major_frame = 1000;
    idle.per_core_utilization = {0.0};
    NodeSchedule busy = idle;
    busy.node = "Y";
    busy.per_core_utilization = {0.736};
    const auto r = utilization_report({idle, busy});
    CHECK(r.average == doctest::Approx(0.368));
    CHECK(r.max.node == "Y");
    CHECK(r.max.utilization == doctest::Approx(0.736));
    CHECK(utilization_report({}).average == 0);
}

TEST_CASE("mutants are flagged") {
    const Scenario s = fwtest::uc1();
    const NodeSchedule good = schedule_of(s, "E3");
    REQUIRE(verify_node_schedule(good).ok());
    auto first_on = [](NodeSchedule& ns, int core, int level) -> TaskSlice& {
        for (auto& sl : ns.slices)
            if (sl.core == core && sl.level == level) return sl;
        throw std::logic_error("no slice");
    };

    SUBCASE("core overlap") {
        NodeSchedule ns = good;
        auto on0 = ns.slices_on(0);
        REQUIRE(on0.size() > 2);
        auto& b = const_cast<TaskSlice&>(*on0[1]);
        const double w = b.end - b.start;
        b.start -= 10;
        b.end = b.start + w;
        CHECK(verify_node_schedule(ns).count(NodeIssue::core_overlap) > 0);
    }
    SUBCASE("isolation") {
        NodeSchedule ns = good;
        TaskSlice& sl = first_on(ns, 0, 1);
        const Partition* high = nullptr;
        for (const auto& p : ns.partitions)
            if (p.core == 0 && p.criticality == 3) high = &p;
        REQUIRE(high);
        sl.partition = high->id;
        CHECK(verify_node_schedule(ns).count(NodeIssue::isolation) > 0);
    }
    SUBCASE("window containment") {
        NodeSchedule ns = good;
        for (auto& p : ns.partitions)
            if (!p.windows.empty()) {
                p.windows.front().end -= 1;
                break;
            }
        CHECK(verify_node_schedule(ns).count(NodeIssue::containment) > 0);
    }
    SUBCASE("job completion") {
        NodeSchedule ns = good;
        ns.slices.front().end -= 1;
        CHECK(verify_node_schedule(ns).count(NodeIssue::job_completion) > 0);
    }
    SUBCASE("migration") {
        NodeSchedule ns = good;
        ns.tasks.front().core = 1 - ns.tasks.front().core;
        CHECK(verify_node_schedule(ns).count(NodeIssue::migration) > 0);
    }
    SUBCASE("utilization record") {
        NodeSchedule ns = good;
        ns.per_core_utilization[0] += 0.01;
        CHECK(verify_node_schedule(ns).count(NodeIssue::utilization) > 0);
    }
    SUBCASE("deadline") {
        NodeSchedule ns = good;
        ns.tasks.front().deadline = 1;
        CHECK(verify_node_schedule(ns).count(NodeIssue::job_completion) > 0);
    }
}

TEST_CASE("slice time is conserved") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
        const Scenario s = fwtest::random_nodes(rng, 1, 6, fwtest::pick(rng, 1, 3));
        const NodeSchedule ns = schedule_of(s, s.nodes[0].id);
        std::map<std::string, double> got;
        for (const auto& sl : ns.slices) got[sl.task] += sl.end - sl.start;
        for (const auto& t : ns.tasks)
            CHECK(got[t.id] == doctest::Approx(ns.major_frame / t.period * t.wcet).epsilon(1e-9));
        CHECK(verify_node_schedule(ns).ok());

        double apps = 0;
        for (const auto& a : s.applications) apps += a.utilization;
        double cores = 0;
        for (double u : ns.per_core_utilization) cores += u;
        CHECK(cores == doctest::Approx(apps).epsilon(1e-9));
    }
}

TEST_CASE("edf never fails below full utilization") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const ApplicationSpec app = fwtest::random_edf_app(rng);
        const FogNodeSpec node{"N", 1, 1};
        NodeSchedule ns;
        REQUIRE_NOTHROW(ns = synthesize_node_schedule(node, map_to_cores({app}, 1)));
        CHECK(verify_node_schedule(ns).ok());
    }
}

TEST_CASE("serial and parallel agree") {
    std::mt19937_64 rng(17);
    const Scenario s = fwtest::random_nodes(rng, 24, 6);
    const auto a = schedule_nodes(s, Exec::serial);
    const auto b = schedule_nodes(s, Exec::parallel);
    REQUIRE(a.size() == b.size());
    std::vector<NodeSchedule> all;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].node == b[i].node);
        CHECK(a[i].schedule == b[i].schedule);
        CHECK(a[i].error == b[i].error);
        if (a[i].schedule) all.push_back(*a[i].schedule);
    }
    const auto va = verify_nodes(all, Exec::serial);
    const auto vb = verify_nodes(all, Exec::parallel);
    for (std::size_t i = 0; i < va.size(); ++i) {
        CHECK(va[i].ok());
        CHECK(va[i].entries.size() == vb[i].entries.size());
    }
}

TEST_CASE("infeasible node does not stop the others") {
    Scenario s = single_node({{"a", "", 1, 1, 1000, 0.9, {}}, {"b", "", 1, 1, 1000, 0.9, {}}}, 1);
    s.nodes.push_back({"M", 1, 1});
    s.applications.push_back({"c", "M", 1, 1, 1000, 0.5, {}});
    const auto out = schedule_nodes(s);
    REQUIRE(out.size() == 2);
    CHECK(!out[0].schedule);
    CHECK(!out[0].unplaced.empty());
    CHECK(out[1].schedule);
}
