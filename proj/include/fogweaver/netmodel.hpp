#pragma once

#include <cstdint>
#include <vector>

#include "fogweaver/scenario.hpp"

namespace fogweaver {

// Link sequence a stream traverses, as indices into Scenario::links.
struct Route {
    std::vector<std::size_t> links;

    std::size_t hops() const { return links.size(); }
};

// Throws NoSuchLink when two adjacent route entities are not linked.
Route resolve_route(const Scenario& s, const StreamSpec& st);

// size*8/rate rounded up to the 0.1 us grid.
Ticks transmission_ticks(int size_bytes, std::int64_t rate_bps);
Micros transmission_time(int size_bytes, std::int64_t rate_bps);

// Transmission time at the slowest link of the route.
Ticks stream_tx_ticks(const Scenario& s, const StreamSpec& st, const Route& r);

// Cut-through bound: C_s + h * d_hop.
Ticks lower_bound_ticks(const Scenario& s, const StreamSpec& st, const Route& r);
Micros lower_bound_delay(const Scenario& s, const StreamSpec& st, const Route& r);

}  // namespace fogweaver
