#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fogweaver/export.hpp"
#include "fogweaver/gclsched.hpp"
#include "fogweaver/nodesched.hpp"
#include "fogweaver/teslasec.hpp"

namespace fogweaver {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode { kExitOk = 0, kExitValidation = 1, kExitInfeasible = 2, kExitIo = 3 };

struct PipelineOptions {
    std::optional<Micros> d_hop;
    std::optional<std::uint64_t> seed;
    Exec exec = Exec::parallel;
    OptimizerOptions optimizer;
    TeslaConfig tesla;
    SolverOptions solver;
};

struct PipelineResult {
    int exit_code = kExitOk;
    Json report;
    Scenario scenario;  // with option overrides applied
    std::optional<NetSchedule> net;
    std::vector<NodeSchedule> nodes;
    std::vector<NodeSchedule> optimized;
    std::optional<TeslaOutcome> tesla;
    std::vector<std::string> diagnostics;
};

// FNV-1a over the canonical rendering of the scenario.
std::string scenario_digest(const Scenario& s);

// validate -> net schedule -> node schedules -> extensibility -> TESLA.
// Stops at the first stage that fails and marks it in the report.
PipelineResult run_pipeline(const Scenario& s, const PipelineOptions& opts = {});

}  // namespace fogweaver
