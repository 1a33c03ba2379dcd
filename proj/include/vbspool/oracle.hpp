// Brute-force ground truth for small pools: enumerate the state space,
// build the generator from the raw transition rates and solve it directly.
// Shares nothing with the recursion code beyond the model types.
#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "vbspool/analytic.hpp"
#include "vbspool/model.hpp"

namespace vbspool {

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

/// Thrown when a state space is larger than the caller allows.
class StateSpaceTooLarge : public std::length_error {
public:
    StateSpaceTooLarge(std::uint64_t size, std::uint64_t cap);

    [[nodiscard]] std::uint64_t size() const noexcept { return size_; }
    [[nodiscard]] std::uint64_t cap() const noexcept { return cap_; }

private:
    std::uint64_t size_;
    std::uint64_t cap_;
};

struct Transition {
    std::size_t from;
    std::size_t to;
    double rate;
};

struct EnumeratedChain {
    PoolConfig config;
    std::vector<StateVector> states;
    std::vector<Transition> transitions;
};

/// All states, ordered with k_M most significant and k_1 least significant.
std::vector<StateVector> enumerate_states(const PoolConfig& config,
                                          std::uint64_t cap = kDefaultEnumerationCap);

/// Arrival arcs (rate lambda) into admissible successors and departure arcs
/// (rate k_m mu); nothing else.
EnumeratedChain build_generator(const PoolConfig& config,
                                std::uint64_t cap = kDefaultEnumerationCap);

/// Dense generator matrix Q with rows summing to zero.
Eigen::MatrixXd generator_matrix(const EnumeratedChain& chain);

enum class StationaryMethod {
    /// Grassmann-Taksar-Heyman elimination. Subtraction-free, so even tiny
    /// probabilities come out with small relative error.
    Gth,
    /// LU solve of Q^T pi = 0 with one row replaced by sum(pi) = 1.
    Lu,
};

/// Stationary distribution of an irreducible chain.
Eigen::VectorXd solve_stationary(const EnumeratedChain& chain,
                                 StationaryMethod method = StationaryMethod::Gth);

/// max_j |(pi Q)_j|.
double global_balance_residual(const EnumeratedChain& chain, const Eigen::VectorXd& pi);

/// max over arcs |pi_i q_ij - pi_j q_ji|. Zero for a reversible chain.
double detailed_balance_residual(const EnumeratedChain& chain, const Eigen::VectorXd& pi);

/// Blocking by direct summation over the solved distribution, with radio
/// blocking averaged over every VBS rather than reduced by symmetry.
BlockingReport blocking_direct(const PoolConfig& config,
                               std::uint64_t cap = kDefaultEnumerationCap);
BlockingReport blocking_direct(const EnumeratedChain& chain, const Eigen::VectorXd& pi);

/// One `from to rate` line per arc, states written as comma-joined counts.
void write_edge_list(std::ostream& out, const EnumeratedChain& chain);

} // namespace vbspool
