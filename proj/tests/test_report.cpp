#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "fogweaver/gantt.hpp"
#include "fogweaver/pipeline.hpp"
#include "util.hpp"

namespace fs = std::filesystem;
using namespace fogweaver;

namespace {

std::size_t occurrences(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

std::size_t lines_starting(const std::string& text, const std::string& prefix) {
    std::size_t n = 0;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        if (line.rfind(prefix, 0) == 0) ++n;
    return n;
}

NodeSchedule fixture_schedule(const std::string& name) {
    return node_schedule_from_json(Json::parse(fwtest::slurp(fwtest::fixture(name))));
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("fogweaver_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run(const std::string& args) {
    const int status = std::system((std::string(FOGWEAVER_BIN) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kOverloaded = R"(
node E { cores 1 }
app "a" on E { level 1 period 10ms util 0.7 }
app "b" on E { level 1 period 10ms util 0.7 }
)";

}  // namespace

TEST_CASE("gantt of an empty schedule is an axis") {
    NodeSchedule empty;
    empty.node = "E";
    empty.cores = 1;
    empty.major_frame = 1000;
    const std::string svg = gantt_node(empty, GanttFormat::svg);
    CHECK(svg.find("class=\"axis\"") != std::string::npos);
    CHECK(occurrences(svg, "class=\"slice") == 0);
    CHECK(gantt_net(NetSchedule{}, Scenario{}, GanttFormat::svg).find("class=\"axis\"") != std::string::npos);
}

TEST_CASE("node gantt shows every slice once") {
    const NodeSchedule base = fixture_schedule("e4_core2_base.json");
    const std::string svg = gantt_node(base, GanttFormat::svg);
    CHECK(occurrences(svg, "class=\"slice") == base.slices.size());
    CHECK(occurrences(svg, "class=\"partition\"") == base.partitions[0].windows.size());
    CHECK(occurrences(svg, "E4 core") == 1);
    const std::string txt = gantt_node(base, GanttFormat::ascii);
    CHECK(lines_starting(txt, "  slice") == base.slices.size());

    const Scenario s = fwtest::uc1();
    for (auto& o : schedule_nodes(s)) {
        const auto& ns = *o.schedule;
        CHECK(occurrences(gantt_node(ns, GanttFormat::svg), "class=\"slice") == ns.slices.size());
        CHECK(lines_starting(gantt_node(ns, GanttFormat::ascii), "  slice") == ns.slices.size());
    }
}

TEST_CASE("preempted jobs are marked when they resume") {
    Scenario s;
    s.nodes.push_back({"N", 1, 1});
    s.applications.push_back({"long", "N", 1, 1, 10000, 0.5, {}});
    s.applications.push_back({"short", "N", 2, 1, 2000, 0.25, {}});
    const auto ns = *schedule_nodes(s)[0].schedule;
    std::set<std::pair<std::string, int>> jobs;
    std::size_t resumed = 0;
    for (const auto& sl : ns.slices)
        if (!jobs.insert({sl.task, sl.job_index}).second) ++resumed;
    REQUIRE(resumed > 0);
    CHECK(occurrences(gantt_node(ns, GanttFormat::svg), "class=\"slice cont\"") == resumed);
    CHECK(lines_starting(gantt_node(ns, GanttFormat::ascii), "  slice+") == resumed);
}

TEST_CASE("misses are drawn distinctly") {
    const NodeSchedule base = fixture_schedule("e4_core2_base.json");
    const auto dyn = parse_task_list(fwtest::slurp(fwtest::fixture("dynamic_apps.tasks")));
    const auto rep = admit_dynamic(base, 0, dyn, 120000);
    REQUIRE(!rep.misses.empty());
    const GanttMarks marks{rep.dynamic_slices, rep.misses, 0, 120000};
    const std::string svg = gantt_node(base, GanttFormat::svg, marks);
    CHECK(occurrences(svg, "class=\"miss\"") == rep.misses.size());
    CHECK(svg.find("stroke:red") != std::string::npos);
    CHECK(occurrences(svg, "class=\"slice") == base.slices.size() + rep.dynamic_slices.size());
    CHECK(lines_starting(gantt_node(base, GanttFormat::ascii, marks), "  MISS") == rep.misses.size());
}

TEST_CASE("net gantt and gcl export") {
    const Scenario s = fwtest::uc1();
    const NetSchedule ns = synthesize_gcl(s);
    CHECK(occurrences(gantt_net(ns, s, GanttFormat::svg), "class=\"slice") == ns.windows.size());
    CHECK(lines_starting(gantt_net(ns, s, GanttFormat::ascii), "  slice") == ns.windows.size());

    const Json gcl = gcl_to_json(ns, s);
    std::size_t entries = 0;
    for (const auto& port : gcl) {
        CHECK(port["cycle_us"] == 300000.0);
        double last = -1;
        for (const auto& e : port["entries"]) {
            CHECK(e["open_us"].get<double>() >= last);
            CHECK(e["close_us"].get<double>() > e["open_us"].get<double>());
            last = e["open_us"].get<double>();
            ++entries;
        }
    }
    CHECK(entries == ns.windows.size());
    CHECK(gcl[0].contains("port"));
}

TEST_CASE("json shapes") {
    const NodeSchedule base = fixture_schedule("e4_core2_base.json");
    const Json nj = node_schedule_to_json(base);
    CHECK(nj["node"] == "E4");
    CHECK(nj["major_frame_us"] == 30000.0);
    CHECK(nj["cores"].size() == 1);
    CHECK(nj["cores"][0].contains("windows"));
    CHECK(nj["cores"][0].contains("slices"));
    CHECK_THROWS_AS(node_schedule_from_json(Json::parse("{\"node\": 1}")), Error);

    const auto dyn = parse_task_list(fwtest::slurp(fwtest::fixture("dynamic_apps.tasks")));
    const Json aj = admission_to_json(admit_dynamic(base, 0, dyn, 120000));
    CHECK(aj["admitted"]["app1"] == false);
    CHECK(aj["misses"][0].contains("release_us"));
    CHECK(aj["misses"][0].contains("deadline_us"));

    const Json oj = overhead_to_json(tesla_overhead_report({{"a", 10}}, {{"a", 30}}));
    CHECK(oj["streams"][0]["delta_us"] == 20.0);
    CHECK(oj["avg_delta_us"] == 20.0);

    const Scenario s = fwtest::uc1();
    for (auto& o : schedule_nodes(s))
        CHECK(node_schedule_from_json(node_schedule_to_json(*o.schedule)) == *o.schedule);
}

TEST_CASE("pipeline on uc1") {
    const Scenario s = fwtest::uc1();
    const auto r = run_pipeline(s);
    CHECK(r.exit_code == kExitOk);
    CHECK(r.report["net"]["streams"].size() == 10);
    CHECK(r.report["nodes"].size() == 5);
    CHECK(r.report["net"]["verified"] == true);
    for (const auto& n : r.report["nodes"]) CHECK(n["verified"] == true);
    CHECK(r.report["utilization"]["average"].get<double>() == doctest::Approx(0.574));
    CHECK(r.report["extensibility"].size() == 10);
    for (const auto& e : r.report["extensibility"]) CHECK(e["after"].get<double>() <= e["before"].get<double>());
    CHECK(r.report["tesla"]["streams"].size() == 10);
    CHECK(r.report["tesla"]["security_tasks"] == 20);
    CHECK(r.report["scenario"] == scenario_digest(s));

    PipelineOptions serial;
    serial.exec = Exec::serial;
    CHECK(run_pipeline(s, serial).report.dump() == r.report.dump());
    CHECK(run_pipeline(s).report.dump() == r.report.dump());

    PipelineOptions seeded;
    seeded.seed = 99;
    const auto other = run_pipeline(s, seeded);
    CHECK(other.report["seed"] == 99);
    CHECK(other.report["scenario"] != r.report["scenario"]);
}

TEST_CASE("pipeline failure stages") {
    const auto over = run_pipeline(parse_scenario(kOverloaded));
    CHECK(over.exit_code == kExitInfeasible);
    CHECK(over.report["nodes"][0]["infeasible"] == true);
    CHECK(over.report["tesla"].is_null());

    Scenario bad = fwtest::uc1();
    bad.applications[0].utilization = 1.5;
    const auto invalid = run_pipeline(bad);
    CHECK(invalid.exit_code == kExitValidation);
    CHECK(invalid.report["validation"].size() == 1);
    CHECK(invalid.report["net"].is_null());

    Scenario jam = fwtest::uc1();
    for (auto& st : jam.streams) st.deadline = 61;
    const auto net = run_pipeline(jam);
    CHECK(net.exit_code == kExitInfeasible);
    CHECK(net.report["net"]["infeasible"] == true);
    CHECK(net.report["nodes"].empty());
}

TEST_CASE("command line") {
    const fs::path dir = scratch("cli");
    const std::string uc1 = fwtest::fixture("uc1.fog");

    CHECK(run("pipeline " + uc1 + " -o " + (dir / "r1.json").string() + " --gantt " + (dir / "g").string()) == 0);
    CHECK(run("pipeline " + uc1 + " -o " + (dir / "r2.json").string()) == 0);
    CHECK(fwtest::slurp((dir / "r1.json").string()) == fwtest::slurp((dir / "r2.json").string()));
    CHECK(fs::exists(dir / "g" / "net.svg"));
    CHECK(fs::exists(dir / "g" / "E3.svg"));
    CHECK(fs::exists(dir / "g" / "E3.opt.svg"));
    const auto report = Json::parse(fwtest::slurp((dir / "r1.json").string()));
    CHECK(report["net"]["streams"].size() == 10);
    CHECK(report["nodes"].size() == 5);
    for (const char* key : {"version", "seed", "net", "nodes", "extensibility", "tesla"}) CHECK(report.contains(key));

    {
        std::ofstream(dir / "broken.fog") << "node E1 { cores }\n";
        std::ofstream(dir / "over.fog") << kOverloaded;
    }
    CHECK(run("pipeline " + (dir / "broken.fog").string()) == 1);
    CHECK(run("validate " + (dir / "broken.fog").string()) == 1);
    CHECK(run("pipeline " + (dir / "over.fog").string() + " -o " + (dir / "over.json").string()) == 2);
    CHECK(Json::parse(fwtest::slurp((dir / "over.json").string()))["nodes"][0]["infeasible"] == true);
    CHECK(run("pipeline " + (dir / "missing.fog").string()) == 3);
    CHECK(run("pipeline " + uc1 + " -o /proc/nope/report.json") == 3);

    CHECK(run("validate " + uc1) == 0);
    CHECK(run("net-schedule " + uc1 + " --d-hop 1 --format ascii --gantt " + (dir / "n").string()) == 0);
    CHECK(fs::exists(dir / "n" / "net.txt"));
    CHECK(run("node-schedule " + uc1 + " --node E4 -o " + (dir / "e4.json").string()) == 0);
    CHECK(run("extensibility " + uc1 + " --optimize") == 0);
    CHECK(run("tesla " + uc1 + " --interval 500 --disclosure 2 -o " + (dir / "t.json").string()) == 0);
    const auto tesla = Json::parse(fwtest::slurp((dir / "t.json").string()));
    CHECK(tesla["streams"].size() == 10);

    const std::string admit = "admit " + fwtest::fixture("e4_core2_optimized.json") + " --dynamic " +
                              fwtest::fixture("dynamic_apps.tasks") + " --node E4 --core 0 --horizon 120 -o " +
                              (dir / "a.json").string();
    CHECK(run(admit) == 0);
    CHECK(Json::parse(fwtest::slurp((dir / "a.json").string()))["misses"].empty());
    CHECK(run("admit " + uc1 + " --dynamic " + fwtest::fixture("dynamic_apps.tasks") +
              " --node E4 --core 1 --horizon 120") == 0);
    CHECK(run("admit " + uc1 + " --dynamic " + fwtest::fixture("dynamic_apps.tasks") +
              " --node E4 --core 1 --horizon 7") == 1);
}
