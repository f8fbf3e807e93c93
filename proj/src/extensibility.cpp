#include "fogweaver/extensibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace fogweaver {

namespace {

struct Span {
    Micros start;
    Micros end;
};

std::vector<TimeWindow> complement(const std::vector<Span>& busy, Micros frame) {
    std::vector<TimeWindow> out;
    Micros cur = 0;
    for (const auto& b : busy) {
        if (b.start > cur + kTimeEps) out.push_back({cur, b.start});
        cur = std::max(cur, b.end);
    }
    if (frame > cur + kTimeEps) out.push_back({cur, frame});
    return out;
}

double deviation(const std::vector<TimeWindow>& idle, Micros frame) {
    if (idle.size() < 2 || frame <= 0) return 0.0;
    double mean = 0;
    for (const auto& w : idle) mean += w.end - w.start;
    mean /= static_cast<double>(idle.size());
    double var = 0;
    for (const auto& w : idle) {
        const double d = (w.end - w.start) - mean;
        var += d * d;
    }
    return std::sqrt(var / static_cast<double>(idle.size())) / frame;
}

std::vector<Span> busy_on(const NodeSchedule& ns, int core) {
    std::vector<Span> busy;
    for (const TaskSlice* sl : ns.slices_on(core)) busy.push_back({sl->start, sl->end});
    return busy;
}

}  // namespace

IdleProfile idle_profile(const NodeSchedule& ns, int core) {
    return {core, complement(busy_on(ns, core), ns.major_frame)};
}

double ext_metric(const NodeSchedule& ns, int core) {
    return deviation(complement(busy_on(ns, core), ns.major_frame), ns.major_frame);
}

namespace {

void optimize_core(NodeSchedule& ns, int core, const OptimizerOptions& opts, std::mt19937_64& rng) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < ns.slices.size(); ++i)
        if (ns.slices[i].core == core) idx.push_back(i);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return ns.slices[a].start < ns.slices[b].start; });
    if (idx.empty()) return;

    const Micros frame = ns.major_frame;
    std::vector<Span> busy;
    for (std::size_t i : idx) busy.push_back({ns.slices[i].start, ns.slices[i].end});

    auto score = [&](double& metric, std::size_t& count) {
        auto idle = complement(busy, frame);
        metric = deviation(idle, frame);
        count = idle.size();
    };
    double current = 0;
    std::size_t gaps = 0;
    score(current, gaps);

    std::vector<std::size_t> visit(idx.size());
    std::iota(visit.begin(), visit.end(), 0);
    std::size_t iterations = 0;
    bool improved = true;
    while (improved && iterations < opts.iteration_budget) {
        improved = false;
        if (opts.seed != 0) std::shuffle(visit.begin(), visit.end(), rng);
        for (std::size_t v : visit) {
            if (++iterations > opts.iteration_budget) break;
            TaskSlice& sl = ns.slices[idx[v]];
            const ScheduledTask* task = ns.find_task(sl.task);
            if (!task) continue;
            const Micros width = sl.end - sl.start;
            const Micros release = sl.job_index * task->period;
            Micros lo = v > 0 ? busy[v - 1].end : 0.0;
            Micros hi = v + 1 < busy.size() ? busy[v + 1].start : frame;
            lo = std::max(lo, release);
            hi = std::min(hi, release + task->deadline);
            if (hi - lo < width - kTimeEps) continue;

            const Micros original = busy[v].start;
            bool found = false;
            double best_metric = current;
            std::size_t best_gaps = gaps;
            Micros best_start = original;
            // the centred start is floored to the 0.1 us grid; the others are neighbour edges
            const Micros centre = std::max(lo, to_micros(static_cast<Ticks>(
                                                   std::floor((lo + (hi - lo - width) / 2) * kTicksPerMicro + kTimeEps))));
            for (Micros start : {lo, hi - width, centre}) {
                if (std::abs(start - original) < kTimeEps) continue;
                busy[v] = {start, start + width};
                double m = 0;
                std::size_t c = 0;
                score(m, c);
                if (m < current - 1e-12 && c >= gaps && (!found || m < best_metric)) {
                    found = true;
                    best_metric = m;
                    best_gaps = c;
                    best_start = start;
                }
            }
            busy[v] = {best_start, best_start + width};
            if (found) {
                sl.start = best_start;
                sl.end = best_start + width;
                current = best_metric;
                gaps = best_gaps;
                improved = true;
                break;
            }
        }
    }
}

}  // namespace

NodeSchedule optimize_extensibility(const NodeSchedule& ns, const OptimizerOptions& opts) {
    NodeSchedule out = ns;
    std::mt19937_64 rng(opts.seed);
    for (int c = 0; c < out.cores; ++c) optimize_core(out, c, opts, rng);
    rebuild_partitions(out);
    return out;
}

namespace {

struct DynJob {
    std::size_t task = 0;
    int index = 0;
    Micros release = 0;
    Micros deadline = 0;
    Micros remaining = 0;
};

bool divides(Micros period, Micros horizon) {
    const double n = horizon / period;
    return period > 0 && std::abs(n - std::round(n)) < 1e-9;
}

}  // namespace

AdmissionReport admit_dynamic(const NodeSchedule& ns, int core, const std::vector<TaskSpec>& dynamic, Micros horizon) {
    if (!(horizon > 0)) throw std::invalid_argument("admit_dynamic: horizon must be positive");
    if (ns.major_frame > 0 && !divides(ns.major_frame, horizon))
        throw std::invalid_argument("admit_dynamic: horizon is not a multiple of the major frame");
    for (const auto& t : dynamic)
        if (!divides(t.period, horizon))
            throw std::invalid_argument("admit_dynamic: horizon is not a multiple of period of " + t.id);

    AdmissionReport rep;
    rep.core = core;
    rep.horizon = horizon;
    for (const auto& t : dynamic) rep.admitted[t.id] = true;

    // static idle time over the horizon, merged across frame boundaries
    std::vector<TimeWindow> idle;
    if (ns.major_frame > 0) {
        const auto frame_idle = idle_profile(ns, core).intervals;
        const auto frames = std::llround(horizon / ns.major_frame);
        for (long long f = 0; f < frames; ++f) {
            for (const auto& w : frame_idle) {
                const TimeWindow shifted{w.start + f * ns.major_frame, w.end + f * ns.major_frame};
                if (!idle.empty() && std::abs(idle.back().end - shifted.start) <= kTimeEps) idle.back().end = shifted.end;
                else idle.push_back(shifted);
            }
        }
    } else {
        idle.push_back({0, horizon});
    }

    std::vector<DynJob> jobs;
    for (std::size_t ti = 0; ti < dynamic.size(); ++ti) {
        const auto& t = dynamic[ti];
        const auto count = std::llround(horizon / t.period);
        for (long long k = 0; k < count; ++k)
            jobs.push_back({ti, static_cast<int>(k), k * t.period, k * t.period + t.deadline, t.wcet});
    }
    std::stable_sort(jobs.begin(), jobs.end(), [](const DynJob& a, const DynJob& b) { return a.release < b.release; });

    auto miss = [&](const DynJob& j) {
        rep.misses.push_back({dynamic[j.task].id, j.release, j.deadline});
        rep.admitted[dynamic[j.task].id] = false;
    };
    auto before = [](const DynJob& a, const DynJob& b) {
        if (a.deadline != b.deadline) return a.deadline < b.deadline;
        if (a.task != b.task) return a.task < b.task;
        return a.index < b.index;
    };

    std::vector<DynJob> ready;
    std::size_t next = 0;
    auto release_until = [&](Micros t) {
        while (next < jobs.size() && jobs[next].release <= t + kTimeEps) ready.push_back(jobs[next++]);
    };
    auto expire = [&](Micros t) {
        auto gone = std::stable_partition(ready.begin(), ready.end(),
                                          [&](const DynJob& j) { return j.deadline > t + kTimeEps; });
        for (auto it = gone; it != ready.end(); ++it) miss(*it);
        ready.erase(gone, ready.end());
    };

    Micros t = 0;
    for (const auto& gap : idle) {
        t = std::max(t, gap.start);
        while (t < gap.end - kTimeEps) {
            release_until(t);
            expire(t);
            const Micros next_release =
                next < jobs.size() ? jobs[next].release : std::numeric_limits<Micros>::infinity();
            if (ready.empty()) {
                t = std::min(next_release, gap.end);
                continue;
            }
            auto top = std::min_element(ready.begin(), ready.end(), before);
            const Micros stop = std::min({t + top->remaining, next_release, top->deadline, gap.end});
            const auto& task = dynamic[top->task];
            TaskSlice* last = rep.dynamic_slices.empty() ? nullptr : &rep.dynamic_slices.back();
            if (last && last->task == task.id && last->job_index == top->index && std::abs(last->end - t) <= kTimeEps)
                last->end = stop;
            else
                rep.dynamic_slices.push_back({task.id, core, "dynamic", 0, t, stop, top->index});
            top->remaining -= stop - t;
            t = stop;
            if (top->remaining <= kTimeEps) ready.erase(top);
        }
    }
    release_until(horizon);
    expire(std::numeric_limits<Micros>::infinity());

    std::stable_sort(rep.misses.begin(), rep.misses.end(), [](const DynamicMiss& a, const DynamicMiss& b) {
        return a.deadline != b.deadline ? a.deadline < b.deadline : a.task < b.task;
    });
    return rep;
}

}  // namespace fogweaver
