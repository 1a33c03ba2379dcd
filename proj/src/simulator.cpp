#include "vbspool/simulator.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <thread>

namespace vbspool {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng replication_rng(std::uint64_t seed, int replication) {
    const std::uint64_t a = splitmix64(seed);
    const std::uint64_t b = splitmix64(a ^ splitmix64(static_cast<std::uint64_t>(replication)));
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return Rng(seq);
}

DurationSampler exponential(double rate) {
    return [dist = std::exponential_distribution<double>(rate)](Rng& rng) mutable {
        return dist(rng);
    };
}

struct Event {
    double time;
    std::uint64_t seq;  // insertion order breaks exact ties
    bool arrival;
    int vbs;  // zero-based

    bool operator>(const Event& other) const {
        return time != other.time ? time > other.time : seq > other.seq;
    }
};

ReplicationResult run_replication(const SimConfig& sim, int replication, const TraceSink* sink) {
    const PoolConfig& pool = sim.pool;
    Rng rng = replication_rng(sim.seed, replication);
    DurationSampler interarrival = sim.interarrival ? sim.interarrival
                                                    : exponential(pool.traffic().lambda());
    DurationSampler holding = sim.holding ? sim.holding : exponential(pool.traffic().mu());

    std::vector<int> occupancy(static_cast<std::size_t>(pool.m_vbs()), 0);
    int total = 0;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> pending;
    std::uint64_t seq = 0;
    for (int v = 0; v < pool.m_vbs(); ++v) pending.push({interarrival(rng), seq++, true, v});

    std::uint64_t offered = 0;
    std::uint64_t counted = 0, radio = 0, comp = 0;
    while (offered < sim.horizon_sessions) {
        const Event ev = pending.top();
        pending.pop();
        const auto slot = static_cast<std::size_t>(ev.vbs);
        if (!ev.arrival) {
            --occupancy[slot];
            --total;
            if (sink) (*sink)({ev.time, TraceEventKind::Departure, ev.vbs + 1, total});
            continue;
        }
        ++offered;
        const bool measured = offered > sim.warmup_sessions;
        if (measured) ++counted;
        TraceEventKind kind = TraceEventKind::ArrivalAdmitted;
        switch (classify_blocking(pool, occupancy, total, ev.vbs + 1)) {
            case BlockingClass::Admit:
                ++occupancy[slot];
                ++total;
                pending.push({ev.time + holding(rng), seq++, false, ev.vbs});
                break;
            case BlockingClass::RadioBlock:
                kind = TraceEventKind::ArrivalRadioBlocked;
                if (measured) ++radio;
                break;
            case BlockingClass::ComputeBlock:
                kind = TraceEventKind::ArrivalComputeBlocked;
                if (measured) ++comp;
                break;
        }
        if (sink) (*sink)({ev.time, kind, ev.vbs + 1, total});
        pending.push({ev.time + interarrival(rng), seq++, true, ev.vbs});
    }

    ReplicationResult result;
    result.offered = counted;
    if (counted > 0) {
        const auto denom = static_cast<double>(counted);
        result.p_radio = static_cast<double>(radio) / denom;
        result.p_comp = static_cast<double>(comp) / denom;
        result.p_total = static_cast<double>(radio + comp) / denom;
    }
    return result;
}

} // namespace

SimConfig SimConfig::with_default_warmup(PoolConfig pool, std::uint64_t horizon_sessions,
                                         int replications, std::uint64_t seed) {
    return SimConfig{std::move(pool), horizon_sessions, horizon_sessions / 10, replications, seed,
                     {}, {}};
}

void SimConfig::validate() const {
    if (horizon_sessions <= warmup_sessions) {
        throw std::invalid_argument("horizon must exceed warmup (offered sessions)");
    }
    if (replications < 1) throw std::invalid_argument("need at least one replication");
}

std::string_view to_string(TraceEventKind kind) noexcept {
    switch (kind) {
        case TraceEventKind::ArrivalAdmitted: return "arrival_admitted";
        case TraceEventKind::ArrivalRadioBlocked: return "arrival_radio_blocked";
        case TraceEventKind::ArrivalComputeBlocked: return "arrival_compute_blocked";
        case TraceEventKind::Departure: return "departure";
    }
    return "unknown";
}

double confidence_halfwidth(std::span<const double> samples, double level) {
    if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("level must lie in (0, 1)");
    const auto n = samples.size();
    if (n < 2) return std::numeric_limits<double>::infinity();
    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : samples) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    const boost::math::students_t dist(static_cast<double>(n - 1));
    const double t = boost::math::quantile(dist, 0.5 + level / 2.0);
    return t * sd / std::sqrt(static_cast<double>(n));
}

Halfwidths halfwidths(const SimEstimate& estimate, double level) {
    std::vector<double> radio, comp, total;
    for (const auto& r : estimate.per_replication) {
        radio.push_back(r.p_radio);
        comp.push_back(r.p_comp);
        total.push_back(r.p_total);
    }
    return {confidence_halfwidth(radio, level), confidence_halfwidth(comp, level),
            confidence_halfwidth(total, level)};
}

SimEstimate simulate(const SimConfig& sim) {
    sim.validate();
    const int reps = sim.replications;
    std::vector<ReplicationResult> results(static_cast<std::size_t>(reps));

    const int workers = std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, reps);
    std::vector<std::future<void>> jobs;
    jobs.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (int r = w; r < reps; r += workers) {
                results[static_cast<std::size_t>(r)] = run_replication(sim, r, nullptr);
            }
        }));
    }
    for (auto& job : jobs) job.get();

    SimEstimate estimate;
    estimate.per_replication = std::move(results);
    for (const auto& r : estimate.per_replication) {
        estimate.p_radio_hat += r.p_radio;
        estimate.p_comp_hat += r.p_comp;
        estimate.offered += r.offered;
    }
    estimate.p_radio_hat /= reps;
    estimate.p_comp_hat /= reps;
    estimate.p_total_hat = estimate.p_radio_hat + estimate.p_comp_hat;
    estimate.ci_halfwidth = halfwidths(estimate, 0.95);
    return estimate;
}

void simulate_trace(const SimConfig& sim, const TraceSink& sink) {
    if (sim.horizon_sessions == 0) return;
    if (sim.horizon_sessions < sim.warmup_sessions) {
        throw std::invalid_argument("warmup exceeds horizon");
    }
    run_replication(sim, 0, &sink);
}

} // namespace vbspool
