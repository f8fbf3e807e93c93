#include "fogweaver/netmodel.hpp"

#include <algorithm>

namespace fogweaver {

Route resolve_route(const Scenario& s, const StreamSpec& st) {
    Route r;
    for (std::size_t i = 0; i + 1 < st.route.size(); ++i) {
        auto idx = s.link_index(st.route[i], st.route[i + 1]);
        if (!idx)
            throw NoSuchLink("stream '" + st.id + "': no link " + st.route[i] + "->" + st.route[i + 1]);
        r.links.push_back(*idx);
    }
    if (r.links.empty()) throw NoSuchLink("stream '" + st.id + "': route has no links");
    return r;
}

Ticks transmission_ticks(int size_bytes, std::int64_t rate_bps) {
    if (size_bytes <= 0 || rate_bps <= 0) throw std::invalid_argument("transmission_time: size and rate must be positive");
    const std::int64_t bits = static_cast<std::int64_t>(size_bytes) * 8;
    // ticks = bits / rate [s] * 1e7 [ticks/s]
    return ceil_div(bits * 10'000'000, rate_bps);
}

Micros transmission_time(int size_bytes, std::int64_t rate_bps) {
    return to_micros(transmission_ticks(size_bytes, rate_bps));
}

Ticks stream_tx_ticks(const Scenario& s, const StreamSpec& st, const Route& r) {
    std::int64_t slowest = s.links.at(r.links.front()).rate_bps;
    for (std::size_t li : r.links) slowest = std::min(slowest, s.links.at(li).rate_bps);
    return transmission_ticks(st.size_bytes, slowest);
}

Ticks lower_bound_ticks(const Scenario& s, const StreamSpec& st, const Route& r) {
    return stream_tx_ticks(s, st, r) + static_cast<Ticks>(r.hops()) * to_ticks(s.params.d_hop);
}

Micros lower_bound_delay(const Scenario& s, const StreamSpec& st, const Route& r) {
    return to_micros(lower_bound_ticks(s, st, r));
}

}  // namespace fogweaver
