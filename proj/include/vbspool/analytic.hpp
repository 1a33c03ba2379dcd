// Exact blocking probabilities through the C/R recursions over
// Poisson-normalized weights.
//
// With p_i = e^{-a} a^i / i!, the normalized weights are
//
//   C(n, m) = sum over k in {0..K}^m with |k| = n of prod p_{k_j}
//   R(n, m) = sum_{j < n} C(j, m)
//
// and every probability of the model is a ratio of these. Values are held as
// natural logarithms: for large M the smallest weights (p_0^M = e^{-aM})
// leave the double range long before their ratios become negligible.
#pragma once

#include <Eigen/Core>

#include <vector>

#include "vbspool/model.hpp"

namespace vbspool {

/// (P_br, P_bc, P_b). `underflow` is set when a reported probability fell
/// below the smallest normal double and was flushed to zero.
struct BlockingReport {
    double p_radio = 0.0;
    double p_comp = 0.0;
    double p_total = 0.0;
    bool underflow = false;
};

/// Cached C and R rows for one (K, a) and every pool size 0..max_vbs.
/// Immutable after construction; safe to share across threads.
class RecursionTable {
public:
    RecursionTable(int k_radio, double a, int max_vbs);

    [[nodiscard]] int k_radio() const noexcept { return k_radio_; }
    [[nodiscard]] double load() const noexcept { return load_; }
    [[nodiscard]] int max_vbs() const noexcept { return static_cast<int>(log_c_.size()) - 1; }

    /// log p_i for 0 <= i <= K.
    [[nodiscard]] double log_poisson(int i) const;

    /// Domain: 0 <= n <= m K.
    [[nodiscard]] double log_c(int n, int m) const;
    /// Domain: 0 <= n <= m K + 1. log_r(0, m) is -infinity.
    [[nodiscard]] double log_r(int n, int m) const;

    [[nodiscard]] double c_value(int n, int m) const;
    [[nodiscard]] double r_value(int n, int m) const;

    /// Row m of log C, indexed by n.
    [[nodiscard]] const Eigen::ArrayXd& log_c_row(int m) const;
    [[nodiscard]] const Eigen::ArrayXd& log_r_row(int m) const;

    /// True when every stored log weight is non-positive and not NaN, so
    /// every weight lies in [0, 1].
    [[nodiscard]] bool normalized() const;

    /// Whether this table can serve `config`.
    [[nodiscard]] bool serves(const PoolConfig& config) const noexcept;

private:
    void check_vbs(int m) const;

    int k_radio_;
    double load_;
    Eigen::ArrayXd log_p_;
    std::vector<Eigen::ArrayXd> log_c_;
    std::vector<Eigen::ArrayXd> log_r_;
};

/// Normalized C(n, m); builds a one-off table.
double c_value(int n, int m, int k_radio, double a);
/// Normalized R(n, m); builds a one-off table.
double r_value(int n, int m, int k_radio, double a);

BlockingReport compute_blocking(const PoolConfig& config);
/// Uses a prebuilt table; throws std::invalid_argument if it does not serve
/// the config.
BlockingReport compute_blocking(const PoolConfig& config, const RecursionTable& table);

/// Product-form probability of `state`. Throws for states outside the space.
double stationary_probability(const PoolConfig& config, const StateVector& state);
double stationary_probability(const PoolConfig& config, const StateVector& state,
                              const RecursionTable& table);

} // namespace vbspool
