#include "vbspool/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace vbspool {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(e^x + e^y) without overflow; either argument may be -inf.
double log_add(double x, double y) {
    if (x < y) std::swap(x, y);
    if (y == kNegInf) return x;
    return x + std::log1p(std::exp(y - x));
}

// exp(x) for log-probabilities, flushing subnormal results to zero.
double to_probability(double log_value, bool& underflow) {
    if (log_value == kNegInf) return 0.0;
    const double value = std::exp(std::min(log_value, 0.0));
    if (value < std::numeric_limits<double>::min()) {
        underflow = true;
        return 0.0;
    }
    return value;
}

} // namespace

RecursionTable::RecursionTable(int k_radio, double a, int max_vbs)
    : k_radio_(k_radio), load_(a) {
    if (k_radio < 1) throw std::invalid_argument("k_radio must be at least 1");
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw std::invalid_argument("offered load a must be positive and finite");
    }
    if (max_vbs < 1) throw std::invalid_argument("max_vbs must be at least 1");

    log_p_.resize(k_radio + 1);
    const double log_a = std::log(a);
    for (int i = 0; i <= k_radio; ++i) {
        log_p_(i) = -a + i * log_a - std::lgamma(i + 1.0);
    }

    log_c_.reserve(static_cast<std::size_t>(max_vbs) + 1);
    log_r_.reserve(static_cast<std::size_t>(max_vbs) + 1);
    // Zero VBSs: only the empty vector, weight one.
    log_c_.push_back(Eigen::ArrayXd::Zero(1));
    log_r_.push_back((Eigen::ArrayXd(2) << kNegInf, 0.0).finished());

    Eigen::ArrayXd terms(k_radio + 1);
    for (int m = 1; m <= max_vbs; ++m) {
        const Eigen::ArrayXd& prev = log_c_.back();
        const int top = m * k_radio;
        Eigen::ArrayXd row(top + 1);
        for (int n = 0; n <= top; ++n) {
            const int lo = std::max(0, n - (m - 1) * k_radio);
            const int hi = std::min(k_radio, n);
            const int count = hi - lo + 1;
            for (int i = lo; i <= hi; ++i) terms(i - lo) = log_p_(i) + prev(n - i);
            const auto active = terms.head(count);
            const double peak = active.maxCoeff();
            const double sum = (active - peak).exp().sum();
            row(n) = std::min(0.0, peak + std::log(sum));
        }
        Eigen::ArrayXd prefix(top + 2);
        prefix(0) = kNegInf;
        for (int n = 1; n <= top + 1; ++n) {
            prefix(n) = std::min(0.0, log_add(prefix(n - 1), row(n - 1)));
        }
        log_c_.push_back(std::move(row));
        log_r_.push_back(std::move(prefix));
    }
}

void RecursionTable::check_vbs(int m) const {
    if (m < 0 || m > max_vbs()) {
        throw std::invalid_argument("pool size " + std::to_string(m) + " outside table range [0, " +
                                    std::to_string(max_vbs()) + "]");
    }
}

double RecursionTable::log_poisson(int i) const {
    if (i < 0 || i > k_radio_) throw std::invalid_argument("occupancy outside [0, K]");
    return log_p_(i);
}

const Eigen::ArrayXd& RecursionTable::log_c_row(int m) const {
    check_vbs(m);
    return log_c_[static_cast<std::size_t>(m)];
}

const Eigen::ArrayXd& RecursionTable::log_r_row(int m) const {
    check_vbs(m);
    return log_r_[static_cast<std::size_t>(m)];
}

double RecursionTable::log_c(int n, int m) const {
    const auto& row = log_c_row(m);
    if (n < 0 || n >= row.size()) {
        throw std::invalid_argument("C(n, m) needs 0 <= n <= m K; got n = " + std::to_string(n));
    }
    return row(n);
}

double RecursionTable::log_r(int n, int m) const {
    const auto& row = log_r_row(m);
    if (n < 0 || n >= row.size()) {
        throw std::invalid_argument("R(n, m) needs 0 <= n <= m K + 1; got n = " +
                                    std::to_string(n));
    }
    return row(n);
}

double RecursionTable::c_value(int n, int m) const { return std::exp(log_c(n, m)); }

double RecursionTable::r_value(int n, int m) const { return std::exp(log_r(n, m)); }

bool RecursionTable::normalized() const {
    const auto ok = [](const Eigen::ArrayXd& row) {
        return !row.isNaN().any() && (row <= 0.0).all();
    };
    return std::all_of(log_c_.begin(), log_c_.end(), ok) &&
           std::all_of(log_r_.begin(), log_r_.end(), ok);
}

bool RecursionTable::serves(const PoolConfig& config) const noexcept {
    return config.k_radio() == k_radio_ && config.load() == load_ &&
           config.m_vbs() <= max_vbs();
}

double c_value(int n, int m, int k_radio, double a) {
    return RecursionTable(k_radio, a, std::max(m, 1)).c_value(n, m);
}

double r_value(int n, int m, int k_radio, double a) {
    return RecursionTable(k_radio, a, std::max(m, 1)).r_value(n, m);
}

BlockingReport compute_blocking(const PoolConfig& config) {
    return compute_blocking(config, RecursionTable(config.k_radio(), config.load(), config.m_vbs()));
}

BlockingReport compute_blocking(const PoolConfig& config, const RecursionTable& table) {
    if (!table.serves(config)) {
        throw std::invalid_argument("recursion table does not match the pool configuration");
    }
    const int m = config.m_vbs();
    const int k = config.k_radio();
    const int n = config.n_comp();

    // log P_0 = -log R(N + 1, M)
    const double log_p0 = -table.log_r(n + 1, m);
    BlockingReport report;
    report.p_comp = to_probability(log_p0 + table.log_c(n, m), report.underflow);
    if (n > k) {
        // Symmetry: every VBS contributes equally, so fix VBS 1 at K and let
        // the other M - 1 hold fewer than N - K sessions.
        report.p_radio = to_probability(
            log_p0 + table.log_poisson(k) + table.log_r(n - k, m - 1), report.underflow);
    }
    report.p_total = report.p_radio + report.p_comp;
    return report;
}

double stationary_probability(const PoolConfig& config, const StateVector& state) {
    return stationary_probability(
        config, state, RecursionTable(config.k_radio(), config.load(), config.m_vbs()));
}

double stationary_probability(const PoolConfig& config, const StateVector& state,
                              const RecursionTable& table) {
    if (!contains(config, state)) {
        throw std::invalid_argument("state " + to_string(state) + " is not in the state space");
    }
    if (!table.serves(config)) {
        throw std::invalid_argument("recursion table does not match the pool configuration");
    }
    double log_value = -table.log_r(config.n_comp() + 1, config.m_vbs());
    for (int k : state.occupancy()) log_value += table.log_poisson(k);
    bool ignored = false;
    return to_probability(log_value, ignored);
}

} // namespace vbspool
