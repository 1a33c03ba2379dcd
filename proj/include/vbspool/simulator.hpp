// Event-driven Monte Carlo simulation of a pool, counting the outcome of
// every offered session after warmup.
#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "vbspool/model.hpp"

namespace vbspool {

using Rng = std::mt19937_64;
/// Draws a positive duration. Empty samplers fall back to exponential ones
/// built from the pool's traffic model.
using DurationSampler = std::function<double(Rng&)>;

struct SimConfig {
    PoolConfig pool;
    std::uint64_t horizon_sessions = 0;  ///< offered sessions per replication
    std::uint64_t warmup_sessions = 0;   ///< discarded from the start of each run
    int replications = 1;
    std::uint64_t seed = 0;
    DurationSampler interarrival;  ///< per VBS
    DurationSampler holding;

    /// Warmup set to a tenth of the horizon.
    static SimConfig with_default_warmup(PoolConfig pool, std::uint64_t horizon_sessions,
                                         int replications, std::uint64_t seed);

    /// Throws std::invalid_argument unless horizon > warmup and replications >= 1.
    void validate() const;
};

struct ReplicationResult {
    double p_radio = 0.0;
    double p_comp = 0.0;
    double p_total = 0.0;
    std::uint64_t offered = 0;
};

struct Halfwidths {
    double radio = 0.0;
    double comp = 0.0;
    double total = 0.0;
};

struct SimEstimate {
    double p_radio_hat = 0.0;
    double p_comp_hat = 0.0;
    double p_total_hat = 0.0;
    Halfwidths ci_halfwidth;  ///< 95 %
    std::uint64_t offered = 0;
    std::vector<ReplicationResult> per_replication;
};

/// Student-t confidence half-width of the mean of `samples` at two-sided
/// `level`. Infinite for fewer than two samples.
double confidence_halfwidth(std::span<const double> samples, double level);

/// Half-widths of an estimate's per-replication means at another level.
Halfwidths halfwidths(const SimEstimate& estimate, double level);

/// Runs the replications (concurrently when cores allow). Replication r
/// draws from a generator seeded by (seed, r), so the result is a pure
/// function of the config.
SimEstimate simulate(const SimConfig& sim);

enum class TraceEventKind { ArrivalAdmitted, ArrivalRadioBlocked, ArrivalComputeBlocked, Departure };

std::string_view to_string(TraceEventKind kind) noexcept;

struct TraceEvent {
    double time;
    TraceEventKind kind;
    int vbs;              ///< 1-based
    int total_occupancy;  ///< after the event
};

using TraceSink = std::function<void(const TraceEvent&)>;

/// Streams every event of replication 0 to `sink`. A zero horizon emits
/// nothing; the run stops at the last offered session.
void simulate_trace(const SimConfig& sim, const TraceSink& sink);

} // namespace vbspool
