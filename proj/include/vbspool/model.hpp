// Pool model: M virtual base stations (VBSs), K radio servers each, N shared
// computational servers, Poisson arrivals and exponential holding times.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vbspool {

/// Per-VBS arrival rate and per-session service rate. The offered load
/// a = lambda / mu is derived and cannot be set on its own.
class TrafficModel {
public:
    TrafficModel(double lambda, double mu);

    /// Unit service rate, lambda = a.
    static TrafficModel from_load(double a);

    [[nodiscard]] double lambda() const noexcept { return lambda_; }
    [[nodiscard]] double mu() const noexcept { return mu_; }
    [[nodiscard]] double load() const noexcept { return load_; }

    friend bool operator==(const TrafficModel&, const TrafficModel&) = default;

private:
    double lambda_;
    double mu_;
    double load_;
};

/// One model instance (M, K, N, traffic).
///
/// Requests with N > M*K are accepted and clamped to M*K; the requested
/// value is kept so callers can report the clamp.
class PoolConfig {
public:
    PoolConfig(int m_vbs, int k_radio, int n_comp, TrafficModel traffic);

    [[nodiscard]] int m_vbs() const noexcept { return m_vbs_; }
    [[nodiscard]] int k_radio() const noexcept { return k_radio_; }
    [[nodiscard]] int n_comp() const noexcept { return n_comp_; }
    [[nodiscard]] int requested_n_comp() const noexcept { return requested_n_; }
    [[nodiscard]] bool clamped() const noexcept { return requested_n_ != n_comp_; }
    [[nodiscard]] int max_comp() const noexcept { return m_vbs_ * k_radio_; }
    [[nodiscard]] const TrafficModel& traffic() const noexcept { return traffic_; }
    [[nodiscard]] double load() const noexcept { return traffic_.load(); }

    /// Same pool and traffic with a different c-server count.
    [[nodiscard]] PoolConfig with_comp(int n_comp) const;

    friend bool operator==(const PoolConfig& lhs, const PoolConfig& rhs) {
        return lhs.m_vbs_ == rhs.m_vbs_ && lhs.k_radio_ == rhs.k_radio_ &&
               lhs.n_comp_ == rhs.n_comp_ && lhs.traffic_ == rhs.traffic_;
    }

private:
    int m_vbs_;
    int k_radio_;
    int n_comp_;
    int requested_n_;
    TrafficModel traffic_;
};

/// Occupancy vector (k_1, ..., k_M) with its cached total.
class StateVector {
public:
    explicit StateVector(std::vector<int> occupancy);

    [[nodiscard]] std::span<const int> occupancy() const noexcept { return occupancy_; }
    [[nodiscard]] int total() const noexcept { return total_; }
    [[nodiscard]] std::size_t size() const noexcept { return occupancy_.size(); }
    /// Zero-based access.
    [[nodiscard]] int operator[](std::size_t i) const { return occupancy_[i]; }

    friend bool operator==(const StateVector&, const StateVector&) = default;
    friend auto operator<=>(const StateVector&, const StateVector&) = default;

private:
    std::vector<int> occupancy_;
    int total_;
};

std::string to_string(const StateVector& state);

/// True iff the state has M entries, each in [0, K], summing to at most N.
bool contains(const PoolConfig& config, const StateVector& state);

enum class BlockingClass { Admit, RadioBlock, ComputeBlock };

std::string_view to_string(BlockingClass cls) noexcept;

/// Outcome of a session arriving at VBS `vbs_index` (1-based).
/// A full pool (total == N) is a compute block even if the VBS is also full.
BlockingClass classify_blocking(const PoolConfig& config, const StateVector& state,
                                int vbs_index);

/// Unchecked form for hot loops: `occupancy` and `total` must describe a
/// member of the state space. Only `vbs_index` is validated.
BlockingClass classify_blocking(const PoolConfig& config, std::span<const int> occupancy,
                                int total, int vbs_index);

bool admits(const PoolConfig& config, const StateVector& state, int vbs_index);

/// Number of vectors with 0 <= k_m <= K and sum <= N. Saturates at
/// UINT64_MAX for astronomically large spaces.
std::uint64_t state_space_size(const PoolConfig& config);

/// Raw fields of a key-value config; any may be absent.
struct PoolConfigFields {
    std::optional<int> m;
    std::optional<int> k;
    std::optional<int> n;
    std::optional<double> lambda;
    std::optional<double> mu;
    std::optional<double> a;

    /// Fields of `overrides` that are set replace ours.
    void merge(const PoolConfigFields& overrides);
    /// Throws std::invalid_argument naming the first missing or conflicting key.
    [[nodiscard]] PoolConfig resolve() const;
};

PoolConfigFields parse_pool_config_fields(std::istream& in);

/// Key-value config text. Recognized keys: m, k, n, lambda, mu, a.
/// `a` replaces lambda (mu defaults to 1). Lines starting with '#' and blank
/// lines are ignored; separators may be '=' or ':'.
PoolConfig parse_pool_config(std::istream& in);
PoolConfig parse_pool_config(std::string_view text);
std::string format_pool_config(const PoolConfig& config);

} // namespace vbspool
