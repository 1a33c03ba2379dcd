// Capacity planning: dimension r-servers for a QoS threshold, sweep the
// c-server count down from full provisioning, and measure the pooling gain.
#pragma once

#include <span>
#include <vector>

#include "vbspool/analytic.hpp"
#include "vbspool/erlang.hpp"

namespace vbspool {

struct SweepPoint {
    int n_comp;
    double normalized_n;  ///< N / (M K)
    double p_radio;
    double p_comp;
    double p_total;
};

struct SweepOptions {
    /// Evaluate every N down to 0 instead of stopping early.
    bool full_descent = false;
    /// Early stop once p_total exceeds max(ceiling, threshold).
    double ceiling = 0.5;
};

struct SweepResult {
    int m_vbs = 0;
    int k_radio = 0;
    double load = 0.0;
    double p_threshold = 0.0;
    /// Ordered by descending n_comp, starting at M K.
    std::vector<SweepPoint> points;
    /// Smallest N with p_total <= p_threshold.
    int n_min = 0;
    /// 1 - n_min / (M K): share of full provisioning that can be switched off.
    double pooling_gain = 0.0;
    LimitBounds limit_bounds{};
    /// E[k_m] / K, the exact large-pool utilization.
    double asymptote = 0.0;
};

SweepResult dimension_pool(int m_vbs, double a, double p_threshold, SweepOptions options = {});

/// Sweep with a prebuilt table whose K must equal dimension_radio(a, p).
SweepResult dimension_pool(int m_vbs, double p_threshold, const RecursionTable& table,
                           SweepOptions options = {});

/// Largest N at which p_comp exceeds p_radio, scanning down from M K; M K
/// when the sweep never crosses. Needs at least two points.
int knee_point(const SweepResult& sweep);

struct PoolSizeGain {
    int m_vbs;
    int n_min;
    double normalized_n_min;
    double pooling_gain;
};

/// One dimension_pool per pool size, sharing one recursion table.
std::vector<PoolSizeGain> gain_vs_pool_size(std::span<const int> m_list, double a,
                                            double p_threshold);

} // namespace vbspool
