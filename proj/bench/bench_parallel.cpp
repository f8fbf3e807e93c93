#include <benchmark/benchmark.h>

#include "../tests/gen.hpp"
#include "fogweaver/gclsched.hpp"
#include "fogweaver/nodesched.hpp"

using namespace fogweaver;

namespace {

const Scenario& node_scenario() {
    static const Scenario s = [] {
        std::mt19937_64 rng(7);
        return fwtest::random_nodes(rng, 256, 8, 4);
    }();
    return s;
}

std::vector<NodeSchedule> schedules() {
    std::vector<NodeSchedule> out;
    for (auto& o : schedule_nodes(node_scenario(), Exec::serial))
        if (o.schedule) out.push_back(std::move(*o.schedule));
    return out;
}

void BM_ScheduleNodes(benchmark::State& state) {
    const auto exec = state.range(0) ? Exec::parallel : Exec::serial;
    for (auto _ : state) benchmark::DoNotOptimize(schedule_nodes(node_scenario(), exec));
}
BENCHMARK(BM_ScheduleNodes)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_VerifyNodes(benchmark::State& state) {
    const auto exec = state.range(0) ? Exec::parallel : Exec::serial;
    static const auto all = schedules();
    for (auto _ : state) benchmark::DoNotOptimize(verify_nodes(all, exec));
}
BENCHMARK(BM_VerifyNodes)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_VerifyNet(benchmark::State& state) {
    const auto exec = state.range(0) ? Exec::parallel : Exec::serial;
    static const auto setup = [] {
        std::mt19937_64 rng(11);
        Scenario s = fwtest::random_streams(rng, 40, true);
        for (auto& st : s.streams) st.size_bytes = 64;
        return std::make_pair(s, synthesize_gcl(s));
    }();
    for (auto _ : state) benchmark::DoNotOptimize(verify_net_schedule(setup.second, setup.first, exec));
}
BENCHMARK(BM_VerifyNet)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
