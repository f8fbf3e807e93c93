#include "fogweaver/gclsched.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <set>

namespace fogweaver {

namespace {

struct Item {
    const StreamSpec* spec = nullptr;
    Route route;
    Ticks period = 0;
    Ticks tx = 0;
    Ticks lo = 0;  // earliest offset
    Ticks hi = 0;  // latest offset meeting deadline and period containment
};

// Window of `a` at hop ja must avoid the windows of an already placed stream
// at hop jb on the same link. Both repeat with period g = gcd(Ta, Tb).
struct SharedLink {
    std::size_t other = 0;  // position in placement order
    Ticks a_shift = 0;      // ja * d_hop
    Ticks b_shift = 0;      // jb * d_hop
    Ticks g = 0;
    Ticks a_len = 0;
    Ticks b_len = 0;
};

class Solver {
public:
    Solver(const Scenario& s, const SolverOptions& opts) : s_(s), opts_(opts), d_hop_(to_ticks(s.params.d_hop)) {}

    NetSchedule run() {
        NetSchedule ns;
        ns.d_hop = d_hop_;
        if (s_.streams.empty()) return ns;

        prepare();
        order();
        build_constraints();
        search();

        std::vector<Micros> periods;
        for (const auto& it : items_) periods.push_back(to_micros(it.period));
        ns.cycle = to_ticks(hyperperiod(periods));
        ns.search_nodes = nodes_;

        for (std::size_t pos = 0; pos < placed_.size(); ++pos) {
            const Item& it = items_[pos];
            const Ticks phi = placed_[pos];
            const auto instances = ns.cycle / it.period;
            for (Ticks k = 0; k < instances; ++k) {
                for (std::size_t j = 0; j < it.route.hops(); ++j) {
                    const Ticks open = k * it.period + phi + static_cast<Ticks>(j) * d_hop_;
                    ns.windows.push_back({it.route.links[j], it.spec->id, static_cast<int>(k), static_cast<int>(j),
                                          open, open + it.tx});
                }
            }
            const Ticks ed = phi + static_cast<Ticks>(it.route.hops()) * d_hop_ + it.tx;
            ns.streams[it.spec->id] = {it.period, phi, to_micros(ed), 0.0};
            ns.objective += std::pow(s_.params.weight_base, it.spec->criticality) * to_micros(phi);
        }
        std::sort(ns.windows.begin(), ns.windows.end(), [](const FrameWindow& a, const FrameWindow& b) {
            return std::tie(a.link, a.open, a.stream) < std::tie(b.link, b.open, b.stream);
        });
        return ns;
    }

private:
    void prepare() {
        std::vector<std::string> hopeless;
        for (const auto& st : s_.streams) {
            Item it;
            it.spec = &st;
            it.route = resolve_route(s_, st);
            it.period = to_ticks(st.period);
            it.tx = stream_tx_ticks(s_, st, it.route);
            it.lo = to_ticks(st.min_offset);
            const Ticks limit = std::min(to_ticks(st.deadline), it.period);
            it.hi = limit - static_cast<Ticks>(it.route.hops()) * d_hop_ - it.tx;
            if (it.hi < it.lo) hopeless.push_back(st.id);
            items_.push_back(std::move(it));
        }
        if (!hopeless.empty())
            throw Infeasible("streams cannot meet their deadline even without contention", hopeless);
    }

    void order() {
        // Seeded rank only separates streams whose sort keys tie exactly.
        std::vector<std::size_t> rank(items_.size());
        std::iota(rank.begin(), rank.end(), 0);
        std::mt19937_64 rng(s_.params.solver_seed);
        std::shuffle(rank.begin(), rank.end(), rng);
        std::vector<std::size_t> idx(items_.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            const Item& x = items_[a];
            const Item& y = items_[b];
            if (x.spec->criticality != y.spec->criticality) return x.spec->criticality > y.spec->criticality;
            if (x.period != y.period) return x.period < y.period;
            if (x.spec->size_bytes != y.spec->size_bytes) return x.spec->size_bytes > y.spec->size_bytes;
            return rank[a] < rank[b];
        });
        std::vector<Item> sorted;
        for (std::size_t i : idx) sorted.push_back(std::move(items_[i]));
        items_ = std::move(sorted);
    }

    void build_constraints() {
        shared_.assign(items_.size(), {});
        for (std::size_t a = 0; a < items_.size(); ++a) {
            for (std::size_t b = 0; b < a; ++b) {
                const Item& x = items_[a];
                const Item& y = items_[b];
                for (std::size_t ja = 0; ja < x.route.hops(); ++ja)
                    for (std::size_t jb = 0; jb < y.route.hops(); ++jb)
                        if (x.route.links[ja] == y.route.links[jb])
                            shared_[a].push_back({b, static_cast<Ticks>(ja) * d_hop_, static_cast<Ticks>(jb) * d_hop_,
                                                  std::gcd(x.period, y.period), x.tx, y.tx});
            }
        }
    }

    // Smallest offset >= from that clears every placed stream sharing a link.
    std::optional<Ticks> next_feasible(std::size_t pos, Ticks from) const {
        const Item& it = items_[pos];
        Ticks phi = std::max(from, it.lo);
        bool moved = true;
        while (moved) {
            if (phi > it.hi) return std::nullopt;
            moved = false;
            for (const auto& c : shared_[pos]) {
                const Ticks other_open = placed_[c.other] + c.b_shift;
                const Ticks r = mod_floor(phi + c.a_shift - other_open, c.g);
                if (r < c.b_len) {
                    phi += c.b_len - r;
                    moved = true;
                } else if (r + c.a_len > c.g) {
                    phi += c.g - r + c.b_len;
                    moved = true;
                }
                if (phi > it.hi) return std::nullopt;
            }
        }
        return phi;
    }

    void search() {
        std::set<std::string> stuck;
        std::size_t pos = 0;
        Ticks from = items_[0].lo;
        placed_.clear();
        while (pos < items_.size()) {
            if (++nodes_ > opts_.node_budget) {
                stuck.insert(items_[pos].spec->id);
                throw Infeasible("search budget exhausted", {stuck.begin(), stuck.end()});
            }
            placed_.resize(pos);
            if (auto phi = next_feasible(pos, from)) {
                placed_.push_back(*phi);
                ++pos;
                if (pos < items_.size()) from = items_[pos].lo;
                continue;
            }
            if (from == items_[pos].lo) stuck.insert(items_[pos].spec->id);
            if (pos == 0) throw Infeasible("no feasible offset assignment", {stuck.begin(), stuck.end()});
            --pos;
            from = placed_[pos] + 1;
        }
    }

    const Scenario& s_;
    SolverOptions opts_;
    Ticks d_hop_;
    std::vector<Item> items_;
    std::vector<std::vector<SharedLink>> shared_;
    std::vector<Ticks> placed_;
    std::uint64_t nodes_ = 0;
};

}  // namespace

NetSchedule synthesize_gcl(const Scenario& s, const SolverOptions& opts) { return Solver(s, opts).run(); }

}  // namespace fogweaver
