#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "vbspool/analytic.hpp"
#include "vbspool/erlang.hpp"
#include "vbspool/simulator.hpp"

using namespace vbspool;

namespace {

PoolConfig pool(int m, int k, int n, double a) {
    return PoolConfig(m, k, n, TrafficModel::from_load(a));
}

} // namespace

TEST_CASE("config validation") {
    auto sim = SimConfig::with_default_warmup(pool(1, 1, 1, 1.0), 1000, 4, 1);
    CHECK(sim.warmup_sessions == 100);
    CHECK_NOTHROW(sim.validate());
    sim.warmup_sessions = 1000;
    CHECK_THROWS_AS(simulate(sim), std::invalid_argument);
    sim.warmup_sessions = 0;
    sim.replications = 0;
    CHECK_THROWS_AS(simulate(sim), std::invalid_argument);
}

TEST_CASE("single server converges to Erlang-B") {
    const auto est = simulate(SimConfig::with_default_warmup(pool(1, 1, 1, 1.0), 1'000'000, 10, 7));
    CHECK(std::abs(est.p_total_hat - 0.5) <= est.ci_halfwidth.total * 1.5);
    CHECK(est.ci_halfwidth.total < 2e-3);
    CHECK(est.p_radio_hat == 0.0);
    CHECK(est.offered == 10u * 900'000u);
}

TEST_CASE("estimates are coherent and bounded") {
    const auto est = simulate(SimConfig::with_default_warmup(pool(3, 2, 4, 1.5), 50'000, 5, 3));
    CHECK(est.p_total_hat == doctest::Approx(est.p_radio_hat + est.p_comp_hat).epsilon(1e-15));
    REQUIRE(est.per_replication.size() == 5);
    for (const auto& r : est.per_replication) {
        CHECK(r.p_total == doctest::Approx(r.p_radio + r.p_comp).epsilon(1e-15));
        CHECK(r.p_total >= 0.0);
        CHECK(r.p_total <= 1.0);
        CHECK(r.offered == 45'000u);
    }
}

TEST_CASE("small pool agrees with the exact solution") {
    const auto cfg = pool(2, 3, 4, 1.0);
    const auto exact = compute_blocking(cfg);
    const auto est = simulate(SimConfig::with_default_warmup(cfg, 200'000, 10, 11));
    CHECK(std::abs(est.p_radio_hat - exact.p_radio) <= 3.0 * est.ci_halfwidth.radio);
    CHECK(std::abs(est.p_comp_hat - exact.p_comp) <= 3.0 * est.ci_halfwidth.comp);
    CHECK(std::abs(est.p_total_hat - exact.p_total) <= 3.0 * est.ci_halfwidth.total);
}

TEST_CASE("identical config gives identical results") {
    const auto sim = SimConfig::with_default_warmup(pool(4, 3, 8, 2.0), 20'000, 6, 99);
    const auto x = simulate(sim);
    const auto y = simulate(sim);
    REQUIRE(x.per_replication.size() == y.per_replication.size());
    for (std::size_t i = 0; i < x.per_replication.size(); ++i) {
        CHECK(x.per_replication[i].p_radio == y.per_replication[i].p_radio);
        CHECK(x.per_replication[i].p_comp == y.per_replication[i].p_comp);
    }
    auto other = sim;
    other.seed = 100;
    CHECK(simulate(other).p_total_hat != x.p_total_hat);
}

TEST_CASE("only the offered load matters") {
    const auto slow = simulate(SimConfig::with_default_warmup(
        PoolConfig(2, 3, 4, TrafficModel(1.0, 1.0)), 200'000, 10, 5));
    const auto fast = simulate(SimConfig::with_default_warmup(
        PoolConfig(2, 3, 4, TrafficModel(2.0, 2.0)), 200'000, 10, 6));
    const double spread = std::hypot(slow.ci_halfwidth.total, fast.ci_halfwidth.total);
    CHECK(std::abs(slow.p_total_hat - fast.p_total_hat) <= 3.0 * spread);
}

TEST_CASE("confidence half-width") {
    const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
    // sd = sqrt(5/3), t(0.975, 3) = 3.182446305284263
    const double expected = 3.182446305284263 * std::sqrt(5.0 / 3.0) / 2.0;
    CHECK(confidence_halfwidth(xs, 0.95) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::isinf(confidence_halfwidth(std::vector<double>{1.0}, 0.95)));
    CHECK_THROWS_AS(confidence_halfwidth(xs, 1.0), std::invalid_argument);
}

TEST_CASE("trace respects the admission invariants") {
    const auto cfg = pool(3, 2, 4, 2.0);
    auto sim = SimConfig::with_default_warmup(cfg, 5'000, 1, 21);
    std::vector<int> occupancy(3, 0);
    int total = 0, arrivals = 0;
    double last = 0.0;
    bool ordered = true, consistent = true;
    simulate_trace(sim, [&](const TraceEvent& ev) {
        ordered = ordered && ev.time >= last;
        last = ev.time;
        const auto slot = static_cast<std::size_t>(ev.vbs - 1);
        switch (ev.kind) {
            case TraceEventKind::ArrivalAdmitted:
                ++arrivals;
                consistent = consistent && total < cfg.n_comp() && occupancy[slot] < cfg.k_radio();
                ++occupancy[slot];
                ++total;
                break;
            case TraceEventKind::ArrivalRadioBlocked:
                ++arrivals;
                consistent = consistent && total < cfg.n_comp() && occupancy[slot] == cfg.k_radio();
                break;
            case TraceEventKind::ArrivalComputeBlocked:
                ++arrivals;
                consistent = consistent && total == cfg.n_comp();
                break;
            case TraceEventKind::Departure:
                consistent = consistent && occupancy[slot] > 0;
                --occupancy[slot];
                --total;
                break;
        }
        consistent = consistent && ev.total_occupancy == total && total <= cfg.n_comp();
        for (int k : occupancy) consistent = consistent && k >= 0 && k <= cfg.k_radio();
    });
    CHECK(ordered);
    CHECK(consistent);
    CHECK(arrivals == 5'000);
}

TEST_CASE("empty horizon traces nothing") {
    SimConfig sim{pool(2, 2, 2, 1.0), 0, 0, 1, 1, {}, {}};
    int events = 0;
    simulate_trace(sim, [&](const TraceEvent&) { ++events; });
    CHECK(events == 0);
}

TEST_CASE("first event is exponential with rate M lambda") {
    // Kolmogorov-Smirnov test of first-event times over many seeds.
    const int m = 4;
    const double lambda = 1.5;
    std::vector<double> times;
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
        SimConfig sim{PoolConfig(m, 2, 3, TrafficModel(lambda, 1.0)), 1, 0, 1, seed, {}, {}};
        bool first = true;
        simulate_trace(sim, [&](const TraceEvent& ev) {
            if (first) times.push_back(ev.time);
            first = false;
        });
    }
    std::sort(times.begin(), times.end());
    double d = 0.0;
    const double n = static_cast<double>(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double cdf = 1.0 - std::exp(-m * lambda * times[i]);
        d = std::max({d, std::abs(cdf - i / n), std::abs(cdf - (i + 1) / n)});
    }
    // 1 % critical value of the KS statistic: 1.628 / sqrt(n)
    CHECK(d < 1.628 / std::sqrt(n));
}

TEST_CASE("holding-time plug-in") {
    // Erlang-B is insensitive to the holding distribution beyond its mean:
    // deterministic unit holding must give the same single-VBS blocking.
    auto sim = SimConfig::with_default_warmup(pool(1, 3, 3, 2.0), 300'000, 10, 17);
    sim.holding = [](Rng&) { return 1.0; };
    const auto est = simulate(sim);
    CHECK(std::abs(est.p_total_hat - erlang_b(3, 2.0)) <= 3.0 * est.ci_halfwidth.total);
}
