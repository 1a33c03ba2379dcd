#include "vbspool/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace vbspool {

TrafficModel::TrafficModel(double lambda, double mu) : lambda_(lambda), mu_(mu), load_(0.0) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("arrival rate lambda must be positive and finite");
    }
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw std::invalid_argument("service rate mu must be positive and finite");
    }
    load_ = lambda_ / mu_;
}

TrafficModel TrafficModel::from_load(double a) { return TrafficModel(a, 1.0); }

PoolConfig::PoolConfig(int m_vbs, int k_radio, int n_comp, TrafficModel traffic)
    : m_vbs_(m_vbs), k_radio_(k_radio), n_comp_(n_comp), requested_n_(n_comp),
      traffic_(traffic) {
    if (m_vbs < 1) throw std::invalid_argument("pool needs at least one VBS (m >= 1)");
    if (k_radio < 1) throw std::invalid_argument("each VBS needs at least one r-server (k >= 1)");
    if (n_comp < 0) throw std::invalid_argument("c-server count must be non-negative (n >= 0)");
    if (static_cast<long long>(m_vbs) * k_radio > std::numeric_limits<int>::max() / 2) {
        throw std::invalid_argument("m * k is too large");
    }
    n_comp_ = std::min(n_comp, m_vbs * k_radio);
}

PoolConfig PoolConfig::with_comp(int n_comp) const {
    return PoolConfig(m_vbs_, k_radio_, n_comp, traffic_);
}

StateVector::StateVector(std::vector<int> occupancy)
    : occupancy_(std::move(occupancy)),
      total_(std::accumulate(occupancy_.begin(), occupancy_.end(), 0)) {
    if (std::any_of(occupancy_.begin(), occupancy_.end(), [](int k) { return k < 0; })) {
        throw std::invalid_argument("occupancy entries must be non-negative");
    }
}

std::string to_string(const StateVector& state) {
    std::string out = "(";
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (i != 0) out += ',';
        out += std::to_string(state[i]);
    }
    out += ')';
    return out;
}

bool contains(const PoolConfig& config, const StateVector& state) {
    if (state.size() != static_cast<std::size_t>(config.m_vbs())) return false;
    const auto occ = state.occupancy();
    return std::all_of(occ.begin(), occ.end(),
                       [&](int k) { return k <= config.k_radio(); }) &&
           state.total() <= config.n_comp();
}

std::string_view to_string(BlockingClass cls) noexcept {
    switch (cls) {
        case BlockingClass::Admit: return "admit";
        case BlockingClass::RadioBlock: return "radio_block";
        case BlockingClass::ComputeBlock: return "compute_block";
    }
    return "unknown";
}

BlockingClass classify_blocking(const PoolConfig& config, std::span<const int> occupancy,
                                int total, int vbs_index) {
    if (vbs_index < 1 || vbs_index > config.m_vbs()) {
        throw std::invalid_argument("VBS index " + std::to_string(vbs_index) +
                                    " outside [1, " + std::to_string(config.m_vbs()) + "]");
    }
    if (total >= config.n_comp()) return BlockingClass::ComputeBlock;
    if (occupancy[static_cast<std::size_t>(vbs_index - 1)] >= config.k_radio()) {
        return BlockingClass::RadioBlock;
    }
    return BlockingClass::Admit;
}

BlockingClass classify_blocking(const PoolConfig& config, const StateVector& state,
                                int vbs_index) {
    if (!contains(config, state)) {
        throw std::invalid_argument("state " + to_string(state) + " is not in the state space");
    }
    return classify_blocking(config, state.occupancy(), state.total(), vbs_index);
}

bool admits(const PoolConfig& config, const StateVector& state, int vbs_index) {
    return classify_blocking(config, state, vbs_index) == BlockingClass::Admit;
}

std::uint64_t state_space_size(const PoolConfig& config) {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    const auto n = static_cast<std::size_t>(config.n_comp());
    const int k = config.k_radio();
    // ways[s]: vectors over the VBSs seen so far with sum exactly s
    std::vector<std::uint64_t> ways(n + 1, 0), next(n + 1);
    ways[0] = 1;
    for (int m = 0; m < config.m_vbs(); ++m) {
        std::fill(next.begin(), next.end(), 0);
        for (std::size_t s = 0; s <= n; ++s) {
            if (ways[s] == 0) continue;
            for (int i = 0; i <= k && s + static_cast<std::size_t>(i) <= n; ++i) {
                auto& slot = next[s + static_cast<std::size_t>(i)];
                slot = (kMax - slot < ways[s]) ? kMax : slot + ways[s];
            }
        }
        ways.swap(next);
    }
    std::uint64_t count = 0;
    for (auto w : ways) count = (kMax - count < w) ? kMax : count + w;
    return count;
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
    T value{};
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw std::invalid_argument("config key '" + std::string(key) + "': cannot parse '" +
                                    std::string(text) + "'");
    }
    return value;
}

} // namespace

void PoolConfigFields::merge(const PoolConfigFields& overrides) {
    if (overrides.m) m = overrides.m;
    if (overrides.k) k = overrides.k;
    if (overrides.n) n = overrides.n;
    if (overrides.mu) mu = overrides.mu;
    if (overrides.a) {
        a = overrides.a;
        lambda.reset();
    }
    if (overrides.lambda) {
        lambda = overrides.lambda;
        a.reset();
    }
}

PoolConfig PoolConfigFields::resolve() const {
    if (!m) throw std::invalid_argument("missing key 'm'");
    if (!k) throw std::invalid_argument("missing key 'k'");
    if (!n) throw std::invalid_argument("missing key 'n'");
    if (a && lambda) throw std::invalid_argument("give either 'a' or 'lambda', not both");
    if (!a && !lambda) throw std::invalid_argument("missing key 'a' (or 'lambda')");
    const double service = mu.value_or(1.0);
    const double arrival = a ? *a * service : *lambda;
    return PoolConfig(*m, *k, *n, TrafficModel(arrival, service));
}

PoolConfigFields parse_pool_config_fields(std::istream& in) {
    PoolConfigFields fields;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto sep = body.find_first_of("=:");
        if (sep == std::string_view::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected 'key = value'");
        }
        const auto key = trim(body.substr(0, sep));
        const auto value = trim(body.substr(sep + 1));
        if (key == "m") fields.m = parse_number<int>(key, value);
        else if (key == "k") fields.k = parse_number<int>(key, value);
        else if (key == "n") fields.n = parse_number<int>(key, value);
        else if (key == "lambda") fields.lambda = parse_number<double>(key, value);
        else if (key == "mu") fields.mu = parse_number<double>(key, value);
        else if (key == "a") fields.a = parse_number<double>(key, value);
        else throw std::invalid_argument("unknown config key '" + std::string(key) + "'");
    }
    return fields;
}

PoolConfig parse_pool_config(std::istream& in) { return parse_pool_config_fields(in).resolve(); }

PoolConfig parse_pool_config(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_pool_config(in);
}

std::string format_pool_config(const PoolConfig& config) {
    std::ostringstream out;
    out.precision(17);
    out << "m = " << config.m_vbs() << '\n'
        << "k = " << config.k_radio() << '\n'
        << "n = " << config.n_comp() << '\n'
        << "lambda = " << config.traffic().lambda() << '\n'
        << "mu = " << config.traffic().mu() << '\n';
    return out.str();
}

} // namespace vbspool
