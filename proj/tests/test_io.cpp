#include "doctest.h"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "vbspool/io.hpp"

using namespace vbspool;

TEST_CASE("number formatting") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(1e-300) == "1e-300");
    CHECK(format_number(280) == "280");
    CHECK(round_significant(1.0 / 3.0) == 0.333333333333);
    CHECK(std::isinf(round_significant(std::numeric_limits<double>::infinity())));
}

TEST_CASE("metadata line and object") {
    const Metadata md{{"command", "sweep"}, {"m", "10"}, {"a", "17.8"}};
    CHECK(metadata_comment(md) == "# vbspool 0.1.0 a=17.8 command=sweep m=10");
    const auto j = metadata_json(md);
    CHECK(j["tool"] == "vbspool");
    CHECK(j["version"] == "0.1.0");
    CHECK(j["parameters"]["m"] == "10");
}

TEST_CASE("sweep CSV round trip") {
    const auto sweep = dimension_pool(4, 17.8, 1e-2);
    std::stringstream buf;
    write_sweep_csv(buf, sweep, {{"m", "4"}});
    std::string first, second;
    std::getline(buf, first);
    std::getline(buf, second);
    CHECK(first == "# vbspool 0.1.0 m=4");
    CHECK(second == kSweepCsvHeader);

    buf.seekg(0);
    const auto points = read_sweep_csv(buf);
    REQUIRE(points.size() == sweep.points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        CHECK(points[i].n_comp == sweep.points[i].n_comp);
        CHECK(points[i].normalized_n == doctest::Approx(sweep.points[i].normalized_n).epsilon(1e-11));
        CHECK(points[i].p_radio == doctest::Approx(sweep.points[i].p_radio).epsilon(1e-11));
        CHECK(points[i].p_comp == doctest::Approx(sweep.points[i].p_comp).epsilon(1e-11));
        CHECK(points[i].p_total == doctest::Approx(sweep.points[i].p_total).epsilon(1e-11));
    }
}

TEST_CASE("malformed sweep CSV") {
    std::istringstream no_header("1,2,3,4,5\n");
    CHECK_THROWS_AS(read_sweep_csv(no_header), std::invalid_argument);
    std::istringstream short_row(std::string(kSweepCsvHeader) + "\n1,2,3\n");
    CHECK_THROWS_AS(read_sweep_csv(short_row), std::invalid_argument);
    std::istringstream empty("# only a comment\n");
    CHECK_THROWS_AS(read_sweep_csv(empty), std::invalid_argument);
}

TEST_CASE("sweep summary") {
    const auto sweep = dimension_pool(1, 17.8, 1e-2);
    const auto j = sweep_summary_json(sweep);
    CHECK(j["m"] == 1);
    CHECK(j["k"] == 28);
    CHECK(j["n_max"] == 28);
    CHECK(j["n_min"] == 28);
    CHECK(j["knee"] == 28);
    CHECK(j["pooling_gain"] == 0.0);
    CHECK(j["limit_upper"].get<double>() == doctest::Approx(17.8 / 28));
    CHECK(j["asymptote"].get<double>() <= j["limit_upper"].get<double>());
    CHECK(j["asymptote"].get<double>() >= j["limit_lower"].get<double>());
}

TEST_CASE("blocking and estimate objects") {
    const auto b = blocking_json({0.25, 0.5, 0.75, false});
    CHECK(b["p_total"] == 0.75);
    CHECK(b["underflow"] == false);

    SimEstimate est;
    est.p_total_hat = 0.5;
    est.ci_halfwidth.total = std::numeric_limits<double>::infinity();
    est.per_replication.push_back({0.1, 0.4, 0.5, 100});
    const auto e = estimate_json(est);
    CHECK(e["ci95_halfwidth"]["p_total"].is_null());
    CHECK(e["per_replication"][0]["offered"] == 100);
}

TEST_CASE("trace lines") {
    std::ostringstream out;
    const auto sink = trace_csv_sink(out);
    sink({0.5, TraceEventKind::ArrivalAdmitted, 2, 1});
    sink({1.25, TraceEventKind::ArrivalRadioBlocked, 1, 1});
    sink({2.0, TraceEventKind::ArrivalComputeBlocked, 3, 4});
    sink({3.0, TraceEventKind::Departure, 2, 0});
    CHECK(out.str() ==
          "0.5,arrival_admitted,2,1\n1.25,arrival_radio_blocked,1,1\n"
          "2,arrival_compute_blocked,3,4\n3,departure,2,0\n");
}
