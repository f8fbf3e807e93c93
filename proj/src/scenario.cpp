#include "fogweaver/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace fogweaver {

const FogNodeSpec* Scenario::find_node(std::string_view id) const {
    for (const auto& n : nodes)
        if (n.id == id) return &n;
    return nullptr;
}

const StreamSpec* Scenario::find_stream(std::string_view id) const {
    for (const auto& st : streams)
        if (st.id == id) return &st;
    return nullptr;
}

const LinkSpec* Scenario::find_link(std::string_view from, std::string_view to) const {
    auto idx = link_index(from, to);
    return idx ? &links[*idx] : nullptr;
}

std::optional<std::size_t> Scenario::link_index(std::string_view from, std::string_view to) const {
    for (std::size_t i = 0; i < links.size(); ++i)
        if (links[i].from == from && links[i].to == to) return i;
    return std::nullopt;
}

bool Scenario::has_entity(std::string_view id) const {
    auto same = [&](const auto& e) { return e.id == id; };
    return std::any_of(nodes.begin(), nodes.end(), same) ||
           std::any_of(switches.begin(), switches.end(), same) ||
           std::any_of(endpoints.begin(), endpoints.end(), same);
}

std::vector<ApplicationSpec> Scenario::apps_on(std::string_view node) const {
    std::vector<ApplicationSpec> out;
    for (const auto& a : applications)
        if (a.node == node) out.push_back(a);
    return out;
}

const char* to_string(ScenarioIssue issue) {
    switch (issue) {
        case ScenarioIssue::duplicate_identifier: return "DuplicateIdentifier";
        case ScenarioIssue::unknown_reference: return "UnknownReference";
        case ScenarioIssue::bad_node: return "BadNode";
        case ScenarioIssue::bad_link: return "BadLink";
        case ScenarioIssue::bad_stream: return "BadStream";
        case ScenarioIssue::bad_route: return "BadRoute";
        case ScenarioIssue::bad_application: return "BadApplication";
        case ScenarioIssue::bad_task: return "BadTask";
        case ScenarioIssue::bad_params: return "BadParams";
    }
    return "?";
}

ValidationReport validate(const Scenario& s) {
    ValidationReport r;
    using I = ScenarioIssue;

    std::set<std::string> entities;
    auto claim = [&](const std::string& id) {
        if (!entities.insert(id).second) r.add(I::duplicate_identifier, "entity '" + id + "' declared twice");
    };
    for (const auto& n : s.nodes) {
        claim(n.id);
        if (n.cores < 1) r.add(I::bad_node, "node '" + n.id + "' has no cores");
        if (n.fn_class < 1 || n.fn_class > 3) r.add(I::bad_node, "node '" + n.id + "' class outside 1..3");
    }
    for (const auto& sw : s.switches) claim(sw.id);
    for (const auto& e : s.endpoints) claim(e.id);

    std::set<std::pair<std::string, std::string>> link_set;
    for (const auto& l : s.links) {
        if (!s.has_entity(l.from) || !s.has_entity(l.to))
            r.add(I::unknown_reference, "link " + l.name() + " names an undeclared entity");
        if (l.rate_bps <= 0) r.add(I::bad_link, "link " + l.name() + " has non-positive rate");
        if (l.from == l.to) r.add(I::bad_link, "link " + l.name() + " is a self loop");
        if (!link_set.insert({l.from, l.to}).second)
            r.add(I::duplicate_identifier, "link " + l.name() + " declared twice");
    }

    std::set<std::string> stream_ids;
    for (const auto& st : s.streams) {
        const std::string who = "stream '" + st.id + "'";
        if (!stream_ids.insert(st.id).second) r.add(I::duplicate_identifier, who + " declared twice");
        if (st.size_bytes <= 0 || st.size_bytes > 1500) r.add(I::bad_stream, who + " size outside (0, 1500] bytes");
        if (!(st.period > 0)) r.add(I::bad_stream, who + " period must be positive");
        if (!(st.deadline > 0)) r.add(I::bad_stream, who + " deadline must be positive");
        if (st.deadline > st.period + kTimeEps) r.add(I::bad_stream, who + " deadline exceeds period");
        if (st.criticality < 0 || st.criticality > 4) r.add(I::bad_stream, who + " criticality outside 0..4");
        if (st.min_offset < 0) r.add(I::bad_stream, who + " negative min_offset");
        if (!s.has_entity(st.src) || !s.has_entity(st.dst))
            r.add(I::unknown_reference, who + " src/dst not declared");

        if (st.route.size() < 2) {
            r.add(I::bad_route, who + " route needs at least two entities");
            continue;
        }
        if (st.route.front() != st.src || st.route.back() != st.dst)
            r.add(I::bad_route, who + " route must start at src and end at dst");
        std::set<std::string> seen;
        for (const auto& hop : st.route) {
            if (!s.has_entity(hop)) r.add(I::unknown_reference, who + " route names undeclared '" + hop + "'");
            if (!seen.insert(hop).second) r.add(I::bad_route, who + " route revisits '" + hop + "'");
        }
        for (std::size_t i = 0; i + 1 < st.route.size(); ++i)
            if (!s.find_link(st.route[i], st.route[i + 1]))
                r.add(I::bad_route, who + " has no link " + st.route[i] + "->" + st.route[i + 1]);
    }

    std::set<std::string> app_ids;
    for (const auto& a : s.applications) {
        const std::string who = "application '" + a.id + "'";
        if (!app_ids.insert(a.id).second) r.add(I::duplicate_identifier, who + " declared twice");
        if (!s.find_node(a.node)) r.add(I::unknown_reference, who + " is not on a declared fog node");
        if (a.level < 0 || a.level > 4) r.add(I::bad_application, who + " level outside 0..4");
        if (!(a.utilization > 0) || a.utilization > 1 + 1e-12)
            r.add(I::bad_application, who + " utilization outside (0, 1]");
        if (a.task_count < 1) r.add(I::bad_application, who + " needs at least one task");
        if (!(a.period > 0)) r.add(I::bad_application, who + " period must be positive");
        if (a.tasks.empty()) continue;

        if (static_cast<int>(a.tasks.size()) != a.task_count)
            r.add(I::bad_application, who + " task count does not match explicit tasks");
        double u = 0;
        std::set<std::string> task_ids;
        for (const auto& t : a.tasks) {
            if (!task_ids.insert(t.id).second)
                r.add(I::duplicate_identifier, who + " task '" + t.id + "' declared twice");
            if (!(t.wcet > 0) || t.wcet > t.deadline + kTimeEps || t.deadline > t.period + kTimeEps)
                r.add(I::bad_task, who + " task '" + t.id + "' violates 0 < wcet <= deadline <= period");
            if (t.period > 0) u += t.wcet / t.period;
        }
        if (std::abs(u - a.utilization) > 1e-9 * std::max(1.0, a.utilization))
            r.add(I::bad_application, who + " explicit WCETs do not sum to the declared utilization");
    }

    if (s.params.d_hop < 0) r.add(I::bad_params, "d_hop must be non-negative");
    if (s.params.default_link_rate <= 0) r.add(I::bad_params, "link_rate must be positive");
    if (!(s.params.weight_base > 0)) r.add(I::bad_params, "weight_base must be positive");
    return r;
}

Micros hyperperiod(const std::vector<Micros>& periods) {
    if (periods.empty()) throw EmptyInput("hyperperiod of an empty period list");
    Ticks h = 1;
    for (Micros p : periods) {
        const Ticks t = to_ticks(p);
        if (t <= 0) throw std::invalid_argument("hyperperiod: periods must be positive");
        h = std::lcm(h, t);
    }
    return to_micros(h);
}

std::vector<TaskSpec> expand_tasks(const ApplicationSpec& a) {
    if (!a.tasks.empty()) return a.tasks;
    std::vector<TaskSpec> out;
    out.reserve(static_cast<std::size_t>(a.task_count));
    const Micros wcet = a.utilization * a.period / a.task_count;
    for (int i = 1; i <= a.task_count; ++i)
        out.push_back({"t" + std::to_string(i), wcet, a.period, a.period});
    return out;
}

}  // namespace fogweaver
