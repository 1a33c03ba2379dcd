// Single-VBS quantities: Erlang-B, truncated-Poisson occupancy, radio
// dimensioning and the large-pool utilization limit.
#pragma once

namespace vbspool {

/// Erlang-B loss probability of K servers offered `a` Erlangs, by the
/// ascending recurrence B(i) = a B(i-1) / (i + a B(i-1)), B(0) = 1.
double erlang_b(int k_radio, double a);

/// Mean occupancy of one VBS with K r-servers and unlimited c-servers:
/// a (1 - B(K, a)).
double truncated_poisson_mean(int k_radio, double a);

/// Smallest K with erlang_b(K, a) <= p_threshold.
int dimension_radio(double a, double p_threshold);

/// Bounds on the asymptotic c-server utilization with N = M K as M grows:
/// a (1 - p) / K <= eta <= a / K.
struct LimitBounds {
    double lower;
    double upper;
};

/// Throws std::domain_error when a > K (upper bound above one).
LimitBounds large_pool_limit(int k_radio, double a, double p_threshold);

/// Exact asymptote E[k_m] / K that the bounds bracket.
double asymptotic_utilization(int k_radio, double a);

} // namespace vbspool
