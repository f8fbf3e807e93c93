#pragma once

#include <json.hpp>

#include "fogweaver/extensibility.hpp"
#include "fogweaver/gclsched.hpp"
#include "fogweaver/nodesched.hpp"
#include "fogweaver/scenario.hpp"
#include "fogweaver/teslasec.hpp"

namespace fogweaver {

using Json = nlohmann::ordered_json;

// One object per egress port carrying traffic, entries sorted by open time.
Json gcl_to_json(const NetSchedule& ns, const Scenario& s);

// Per-stream offset, ED and jitter in scenario order.
Json net_summary_json(const NetSchedule& ns, const Scenario& s);

Json node_schedule_to_json(const NodeSchedule& ns);

// Inverse of node_schedule_to_json. Throws Error on a malformed document.
NodeSchedule node_schedule_from_json(const Json& j);

Json admission_to_json(const AdmissionReport& r);
Json overhead_to_json(const OverheadReport& r);
Json overlay_to_json(const SecurityOverlay& o);

template <class Kind>
Json report_to_json(const Report<Kind>& r) {
    Json out = Json::array();
    for (const auto& e : r.entries) out.push_back({{"kind", to_string(e.kind)}, {"message", e.message}});
    return out;
}

}  // namespace fogweaver
