#include "vbspool/oracle.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <string>
#include <utility>

namespace vbspool {
namespace {

// Dense elimination beyond this is not what the oracle is for.
constexpr std::size_t kDenseLimit = 20'000;

std::string edge_label(const StateVector& state) {
    std::string out;
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (i != 0) out += ',';
        out += std::to_string(state[i]);
    }
    return out;
}

Eigen::VectorXd solve_gth(Eigen::MatrixXd a) {
    const auto n = a.rows();
    std::vector<Eigen::Index> col_nz, row_nz;
    for (Eigen::Index k = n - 1; k > 0; --k) {
        col_nz.clear();
        row_nz.clear();
        double outflow = 0.0;
        for (Eigen::Index j = 0; j < k; ++j) {
            if (a(k, j) != 0.0) {
                row_nz.push_back(j);
                outflow += a(k, j);
            }
            if (a(j, k) != 0.0) col_nz.push_back(j);
        }
        if (!(outflow > 0.0)) {
            throw std::runtime_error("generator is reducible; state " + std::to_string(k) +
                                     " cannot reach lower states");
        }
        for (auto i : col_nz) a(i, k) /= outflow;
        for (auto i : col_nz) {
            const double scale = a(i, k);
            for (auto j : row_nz) a(i, j) += scale * a(k, j);
        }
    }
    Eigen::VectorXd pi(n);
    pi(0) = 1.0;
    for (Eigen::Index k = 1; k < n; ++k) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < k; ++i) acc += pi(i) * a(i, k);
        pi(k) = acc;
    }
    return pi / pi.sum();
}

Eigen::VectorXd solve_lu(const Eigen::MatrixXd& q) {
    const auto n = q.rows();
    Eigen::MatrixXd system = q.transpose();
    system.row(n - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(n - 1) = 1.0;
    return system.partialPivLu().solve(rhs);
}

} // namespace

StateSpaceTooLarge::StateSpaceTooLarge(std::uint64_t size, std::uint64_t cap)
    : std::length_error("state space has " + std::to_string(size) +
                        " states, above the enumeration cap of " + std::to_string(cap)),
      size_(size), cap_(cap) {}

std::vector<StateVector> enumerate_states(const PoolConfig& config, std::uint64_t cap) {
    const auto size = state_space_size(config);
    if (size > cap) throw StateSpaceTooLarge(size, cap);

    const auto m = static_cast<std::size_t>(config.m_vbs());
    const int k = config.k_radio();
    const int n = config.n_comp();
    std::vector<StateVector> states;
    states.reserve(size);
    std::vector<int> digits(m, 0);
    int total = 0;
    while (true) {
        states.emplace_back(digits);
        // Odometer with k_1 as the fastest digit; skip past any vector that
        // breaks the per-VBS or pool limit.
        std::size_t pos = 0;
        while (pos < m) {
            if (digits[pos] < k && total < n) {
                ++digits[pos];
                ++total;
                break;
            }
            total -= digits[pos];
            digits[pos] = 0;
            ++pos;
        }
        if (pos == m) break;
    }
    return states;
}

EnumeratedChain build_generator(const PoolConfig& config, std::uint64_t cap) {
    EnumeratedChain chain{config, enumerate_states(config, cap), {}};
    std::map<std::vector<int>, std::size_t> index;
    for (std::size_t i = 0; i < chain.states.size(); ++i) {
        const auto occ = chain.states[i].occupancy();
        index.emplace(std::vector<int>(occ.begin(), occ.end()), i);
    }
    const double lambda = config.traffic().lambda();
    const double mu = config.traffic().mu();
    std::vector<int> probe;
    for (std::size_t i = 0; i < chain.states.size(); ++i) {
        const auto& state = chain.states[i];
        const auto occ = state.occupancy();
        for (std::size_t v = 0; v < occ.size(); ++v) {
            probe.assign(occ.begin(), occ.end());
            if (admits(config, state, static_cast<int>(v) + 1)) {
                ++probe[v];
                chain.transitions.push_back({i, index.at(probe), lambda});
                --probe[v];
            }
            if (occ[v] > 0) {
                --probe[v];
                chain.transitions.push_back({i, index.at(probe), occ[v] * mu});
            }
        }
    }
    return chain;
}

Eigen::MatrixXd generator_matrix(const EnumeratedChain& chain) {
    const auto n = chain.states.size();
    if (n > kDenseLimit) {
        throw StateSpaceTooLarge(n, kDenseLimit);
    }
    const auto size = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(size, size);
    for (const auto& t : chain.transitions) {
        const auto from = static_cast<Eigen::Index>(t.from);
        q(from, static_cast<Eigen::Index>(t.to)) += t.rate;
        q(from, from) -= t.rate;
    }
    return q;
}

Eigen::VectorXd solve_stationary(const EnumeratedChain& chain, StationaryMethod method) {
    if (chain.states.empty()) throw std::invalid_argument("chain has no states");
    if (chain.states.size() == 1) return Eigen::VectorXd::Ones(1);
    const Eigen::MatrixXd q = generator_matrix(chain);
    switch (method) {
        case StationaryMethod::Gth: {
            Eigen::MatrixXd rates = q;
            rates.diagonal().setZero();
            return solve_gth(std::move(rates));
        }
        case StationaryMethod::Lu: return solve_lu(q);
    }
    throw std::invalid_argument("unknown stationary method");
}

double global_balance_residual(const EnumeratedChain& chain, const Eigen::VectorXd& pi) {
    const Eigen::VectorXd flow = generator_matrix(chain).transpose() * pi;
    return flow.cwiseAbs().maxCoeff();
}

double detailed_balance_residual(const EnumeratedChain& chain, const Eigen::VectorXd& pi) {
    std::map<std::pair<std::size_t, std::size_t>, double> rate;
    for (const auto& t : chain.transitions) rate[{t.from, t.to}] += t.rate;
    double worst = 0.0;
    for (const auto& [arc, forward] : rate) {
        const auto back = rate.find({arc.second, arc.first});
        const double backward = back == rate.end() ? 0.0 : back->second;
        const auto i = static_cast<Eigen::Index>(arc.first);
        const auto j = static_cast<Eigen::Index>(arc.second);
        worst = std::max(worst, std::abs(pi(i) * forward - pi(j) * backward));
    }
    return worst;
}

BlockingReport blocking_direct(const EnumeratedChain& chain, const Eigen::VectorXd& pi) {
    const auto& config = chain.config;
    const int m = config.m_vbs();
    BlockingReport report;
    double radio_sum = 0.0;
    for (std::size_t s = 0; s < chain.states.size(); ++s) {
        const auto& state = chain.states[s];
        const double p = pi(static_cast<Eigen::Index>(s));
        if (state.total() == config.n_comp()) {
            report.p_comp += p;
            continue;
        }
        for (int v = 0; v < m; ++v) {
            if (state[static_cast<std::size_t>(v)] == config.k_radio()) radio_sum += p;
        }
    }
    report.p_radio = radio_sum / m;
    report.p_total = report.p_radio + report.p_comp;
    return report;
}

BlockingReport blocking_direct(const PoolConfig& config, std::uint64_t cap) {
    const auto chain = build_generator(config, cap);
    return blocking_direct(chain, solve_stationary(chain));
}

void write_edge_list(std::ostream& out, const EnumeratedChain& chain) {
    const auto old_precision = out.precision(17);
    for (const auto& t : chain.transitions) {
        out << edge_label(chain.states[t.from]) << ' ' << edge_label(chain.states[t.to]) << ' '
            << t.rate << '\n';
    }
    out.precision(old_precision);
}

} // namespace vbspool
