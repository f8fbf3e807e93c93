#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fogweaver/common.hpp"

namespace fogweaver {

struct FogNodeSpec {
    std::string id;
    int cores = 2;
    int fn_class = 1;  // metadata only

    bool operator==(const FogNodeSpec&) const = default;
};

struct SwitchSpec {
    std::string id;

    bool operator==(const SwitchSpec&) const = default;
};

enum class EndpointKind { sensor, actuator };

struct EndpointSpec {
    std::string id;
    EndpointKind kind = EndpointKind::sensor;

    bool operator==(const EndpointSpec&) const = default;
};

// Directed link; duplex connections are declared as two links.
struct LinkSpec {
    std::string from;
    std::string to;
    std::int64_t rate_bps = 100'000'000;

    std::string name() const { return from + "->" + to; }
    bool operator==(const LinkSpec&) const = default;
};

struct StreamSpec {
    std::string id;
    std::string src;
    std::string dst;
    int size_bytes = 0;
    Micros period = 0;
    Micros deadline = 0;
    int criticality = 0;
    std::vector<std::string> route;  // entity ids, src first, dst last
    Micros min_offset = 0;           // earliest injection after release

    bool operator==(const StreamSpec&) const = default;
};

struct TaskSpec {
    std::string id;
    Micros wcet = 0;
    Micros period = 0;
    Micros deadline = 0;

    bool operator==(const TaskSpec&) const = default;
};

struct ApplicationSpec {
    std::string id;
    std::string node;
    int level = 0;
    int task_count = 1;
    Micros period = 0;
    double utilization = 0;
    std::vector<TaskSpec> tasks;  // explicit WCETs; empty means equal split

    bool operator==(const ApplicationSpec&) const = default;
};

struct ModelParams {
    Micros d_hop = 2;
    std::int64_t default_link_rate = 100'000'000;
    std::uint64_t solver_seed = 0;
    double weight_base = 2;

    bool operator==(const ModelParams&) const = default;
};

struct Scenario {
    std::vector<FogNodeSpec> nodes;
    std::vector<SwitchSpec> switches;
    std::vector<EndpointSpec> endpoints;
    std::vector<LinkSpec> links;
    std::vector<StreamSpec> streams;
    std::vector<ApplicationSpec> applications;
    ModelParams params;

    const FogNodeSpec* find_node(std::string_view id) const;
    const StreamSpec* find_stream(std::string_view id) const;
    const LinkSpec* find_link(std::string_view from, std::string_view to) const;
    std::optional<std::size_t> link_index(std::string_view from, std::string_view to) const;
    bool has_entity(std::string_view id) const;

    // Applications assigned to the given node, in declaration order.
    std::vector<ApplicationSpec> apps_on(std::string_view node) const;

    bool operator==(const Scenario&) const = default;
};

enum class ScenarioIssue {
    duplicate_identifier,
    unknown_reference,
    bad_node,
    bad_link,
    bad_stream,
    bad_route,
    bad_application,
    bad_task,
    bad_params,
};

using ValidationReport = Report<ScenarioIssue>;

// Parses the scenario DSL. Throws SyntaxError, DuplicateIdentifier or UnknownReference.
Scenario parse_scenario(std::string_view text);

// Bare task list, one `task <name> wcet <d> period <d> [deadline <d>]` per entry.
std::vector<TaskSpec> parse_task_list(std::string_view text);

// Canonical DSL rendering; parse_scenario(print_scenario(s)) == s.
std::string print_scenario(const Scenario& s);

ValidationReport validate(const Scenario& s);

// Least common multiple of the periods (computed on the 0.1 us grid).
Micros hyperperiod(const std::vector<Micros>& periods);

// Explicit tasks if given, otherwise task_count equal-WCET tasks.
std::vector<TaskSpec> expand_tasks(const ApplicationSpec& a);

const char* to_string(ScenarioIssue issue);

}  // namespace fogweaver
