#include "doctest.h"

#include <cmath>
#include <set>
#include <sstream>
#include <string>

#include "vbspool/analytic.hpp"
#include "vbspool/erlang.hpp"
#include "vbspool/oracle.hpp"

using namespace vbspool;

namespace {

PoolConfig pool(int m, int k, int n, double a) {
    return PoolConfig(m, k, n, TrafficModel::from_load(a));
}

double rel(double x, double y) {
    const double scale = std::max(std::abs(x), std::abs(y));
    return scale == 0.0 ? 0.0 : std::abs(x - y) / scale;
}

} // namespace

TEST_CASE("state enumeration examples") {
    const auto one = enumerate_states(pool(1, 2, 2, 1.0));
    REQUIRE(one.size() == 3);
    CHECK(one[0] == StateVector({0}));
    CHECK(one[1] == StateVector({1}));
    CHECK(one[2] == StateVector({2}));

    const auto two = enumerate_states(pool(2, 1, 1, 1.0));
    REQUIRE(two.size() == 3);
    CHECK(two[0] == StateVector({0, 0}));
    CHECK(two[1] == StateVector({1, 0}));
    CHECK(two[2] == StateVector({0, 1}));

    const auto fig = enumerate_states(pool(2, 3, 4, 1.0));
    CHECK(fig.size() == 13);
    CHECK(std::set<StateVector>(fig.begin(), fig.end()).size() == 13);
    for (const auto& s : fig) CHECK(contains(pool(2, 3, 4, 1.0), s));
}

TEST_CASE("enumeration refuses oversized spaces") {
    try {
        enumerate_states(pool(3, 4, 12, 1.0), 100);
        FAIL("expected StateSpaceTooLarge");
    } catch (const StateSpaceTooLarge& e) {
        CHECK(e.size() == 125);
        CHECK(e.cap() == 100);
    }
}

TEST_CASE("generator arcs") {
    SUBCASE("two-state chain") {
        const auto chain = build_generator(PoolConfig(1, 1, 1, TrafficModel(2.0, 1.0)));
        REQUIRE(chain.transitions.size() == 2);
        CHECK(chain.transitions[0].from == 0);
        CHECK(chain.transitions[0].to == 1);
        CHECK(chain.transitions[0].rate == 2.0);
        CHECK(chain.transitions[1].from == 1);
        CHECK(chain.transitions[1].to == 0);
        CHECK(chain.transitions[1].rate == 1.0);
    }
    SUBCASE("14-state graph") {
        const auto chain = build_generator(pool(2, 3, 4, 1.0));
        // Undirected edges of the grid {k1,k2 <= 3, k1+k2 <= 4}: rows k2 = 0..3
        // hold 4, 4, 3, 2 states, so 3 + 3 + 2 + 1 = 9 horizontal edges and
        // 9 vertical ones by symmetry, each traversed both ways.
        CHECK(chain.transitions.size() == 2 * 18);
        for (const auto& t : chain.transitions) {
            const auto& from = chain.states[t.from];
            const auto& to = chain.states[t.to];
            int changed = 0, delta = 0;
            for (std::size_t i = 0; i < from.size(); ++i) {
                if (from[i] != to[i]) {
                    ++changed;
                    delta = to[i] - from[i];
                    CHECK(t.rate == (delta > 0 ? 1.0 : from[i] * 1.0));
                }
            }
            CHECK(changed == 1);
            CHECK(std::abs(delta) == 1);
            if (from == StateVector({2, 2})) CHECK(delta == -1);
        }
    }
}

TEST_CASE("stationary solve on a birth-death chain") {
    const auto chain = build_generator(pool(1, 2, 2, 1.0));
    const auto pi = solve_stationary(chain);
    CHECK(pi(0) == doctest::Approx(1.0 / 2.5).epsilon(1e-15));
    CHECK(pi(1) == doctest::Approx(1.0 / 2.5).epsilon(1e-15));
    CHECK(pi(2) == doctest::Approx(0.5 / 2.5).epsilon(1e-15));
    const auto lu = solve_stationary(chain, StationaryMethod::Lu);
    CHECK((pi - lu).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("stationary solve reproduces the product form and reversibility") {
    for (const auto& cfg : {pool(2, 3, 4, 1.0), pool(3, 3, 6, 1.0), pool(3, 2, 4, 2.5),
                            pool(4, 3, 7, 0.5)}) {
        const auto chain = build_generator(cfg);
        const auto pi = solve_stationary(chain);
        const RecursionTable table(cfg.k_radio(), cfg.load(), cfg.m_vbs());
        CHECK(pi.sum() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(global_balance_residual(chain, pi) < 1e-10);
        CHECK(detailed_balance_residual(chain, pi) < 1e-12);
        CHECK(pi(0) == doctest::Approx(stationary_probability(cfg, chain.states[0], table))
                           .epsilon(1e-12));
        for (std::size_t i = 0; i < chain.states.size(); ++i) {
            CHECK(rel(pi(static_cast<Eigen::Index>(i)),
                      stationary_probability(cfg, chain.states[i], table)) <= 1e-10);
        }
        const auto lu = solve_stationary(chain, StationaryMethod::Lu);
        CHECK((pi - lu).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("stationary distribution is permutation symmetric") {
    const auto chain = build_generator(pool(3, 3, 5, 1.3));
    const auto pi = solve_stationary(chain);
    for (std::size_t i = 0; i < chain.states.size(); ++i) {
        const auto& s = chain.states[i];
        const StateVector swapped({s[1], s[0], s[2]});
        for (std::size_t j = 0; j < chain.states.size(); ++j) {
            if (chain.states[j] == swapped) {
                CHECK(rel(pi(static_cast<Eigen::Index>(i)), pi(static_cast<Eigen::Index>(j))) <
                      1e-12);
            }
        }
    }
}

TEST_CASE("direct blocking examples") {
    const auto single = blocking_direct(pool(1, 3, 3, 1.0));
    CHECK(single.p_radio == 0.0);
    CHECK(rel(single.p_comp, erlang_b(3, 1.0)) <= 1e-12);

    const auto fig = blocking_direct(pool(2, 3, 4, 1.0));
    const auto rec = compute_blocking(pool(2, 3, 4, 1.0));
    CHECK(rel(fig.p_radio, rec.p_radio) <= 1e-12);
    CHECK(rel(fig.p_comp, rec.p_comp) <= 1e-12);
    CHECK(rel(fig.p_total, rec.p_total) <= 1e-12);

    CHECK(rel(blocking_direct(pool(2, 3, 6, 1.0)).p_total, erlang_b(3, 1.0)) <= 1e-12);
    CHECK(blocking_direct(pool(2, 3, 0, 1.0)).p_comp == 1.0);
}

TEST_CASE("edge list dump") {
    const auto chain = build_generator(PoolConfig(2, 1, 1, TrafficModel(0.5, 1.0)));
    std::ostringstream out;
    write_edge_list(out, chain);
    CHECK(out.str() == "0,0 1,0 0.5\n0,0 0,1 0.5\n1,0 0,0 1\n0,1 0,0 1\n");
}
