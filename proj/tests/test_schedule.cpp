#include <catch_amalgamated.hpp>

#include "qst/schedule.hpp"

using namespace qst;
using Catch::Approx;

TEST_CASE("rabi schedule endpoint and midpoint values") {
    const auto s = ProtocolSchedule::rabi({0.1, 86.0});
    const auto start = s.evaluate(0.0);
    CHECK(start.t1 == 1.0);
    CHECK(start.t2 == Approx(0.0).margin(1e-15));
    CHECK(start.delta == 0.0);
    const auto mid = s.evaluate(43.0);
    CHECK(mid.t2 == Approx(0.9).margin(1e-12));
    const auto end = s.evaluate(86.0);
    CHECK(end.t2 == Approx(0.0).margin(1e-12));
    CHECK_THROWS_AS(s.evaluate(-1.0), std::domain_error);
    CHECK_THROWS_AS(s.evaluate(86.0001), std::domain_error);
}

TEST_CASE("rabi schedule time-reversal symmetry") {
    const auto s = ProtocolSchedule::rabi({0.3, 50.0});
    for (double t : {0.0, 3.7, 12.5, 24.9}) {
        CHECK(s.evaluate(t).t2 == Approx(s.evaluate(50.0 - t).t2).margin(1e-12));
    }
}

TEST_CASE("lz schedule stages") {
    const LZParams p{0.1, 0.2, 60.0, 120.0};
    const auto s = ProtocolSchedule::lz(p);
    REQUIRE(s.duration() == Approx(240.0));
    // stage I
    auto v = s.evaluate(0.0);
    CHECK(v.t2 == Approx(0.0).margin(1e-15));
    CHECK(v.delta == 0.2);
    // linear ramp midpoint crosses delta = 0 at full delocalization
    v = s.evaluate(120.0);
    CHECK(v.t1 == 1.0);
    CHECK(v.t2 == Approx(0.9).margin(1e-12));
    CHECK(v.delta == Approx(0.0).margin(1e-12));
    // stage III endpoint
    v = s.evaluate(240.0);
    CHECK(v.t2 == Approx(0.0).margin(1e-12));
    CHECK(v.delta == -0.2);
}

TEST_CASE("lz schedule continuity at stage boundaries") {
    const auto s = ProtocolSchedule::lz({0.1, 0.2, 60.0, 120.0});
    const double eps = 1e-9;
    for (double boundary : {60.0, 180.0}) {
        const auto before = s.evaluate(boundary - eps);
        const auto at = s.evaluate(boundary);
        const auto after = s.evaluate(boundary + eps);
        CHECK(before.t2 == Approx(at.t2).margin(1e-7));
        CHECK(after.t2 == Approx(at.t2).margin(1e-7));
        CHECK(before.delta == Approx(at.delta).margin(1e-7));
        CHECK(after.delta == Approx(at.delta).margin(1e-7));
    }
}

TEST_CASE("schedule parameter validation") {
    CHECK_THROWS_AS(ProtocolSchedule::rabi({0.0, 86.0}), std::invalid_argument);
    CHECK_THROWS_AS(ProtocolSchedule::rabi({1.5, 86.0}), std::invalid_argument);
    CHECK_THROWS_AS(ProtocolSchedule::lz({0.1, -0.2, 60.0, 120.0}), std::invalid_argument);
    CHECK_THROWS_AS(ProtocolSchedule::lz({0.1, 0.2, 60.0, 0.0}), std::invalid_argument);
}

TEST_CASE("area_integral on the reference Rabi pulse") {
    const double area = area_integral(ProtocolSchedule::rabi({0.1, 86.0}), 10);
    CHECK(area == Approx(M_PI / 2.0).epsilon(0.25));
}

TEST_CASE("area_integral vanishes for a decoupled chain") {
    CHECK(area_integral(ProtocolSchedule::fixed({1.0, 0.0, 0.0, 100.0}), 10) == 0.0);
}

TEST_CASE("area_integral is linear in the Rabi duration") {
    const double a1 = area_integral(ProtocolSchedule::rabi({0.2, 40.0}), 8);
    const double a2 = area_integral(ProtocolSchedule::rabi({0.2, 80.0}), 8);
    CHECK(a2 == Approx(2.0 * a1).epsilon(1e-7));
}

TEST_CASE("solve_rabi_area_time brackets the reference optimum") {
    const double t_star = solve_rabi_area_time(0.1, 10);
    CHECK(t_star > 65.0);
    CHECK(t_star < 110.0);
    CHECK(area_integral(ProtocolSchedule::rabi({0.1, t_star}), 10) ==
          Approx(M_PI / 2.0).margin(2e-6));
}

TEST_CASE("solve_rabi_area_time grows with epsilon") {
    CHECK(solve_rabi_area_time(0.2, 10) > solve_rabi_area_time(0.1, 10));
}

TEST_CASE("solve_rabi_area_time doubles with the target area") {
    const double t1 = solve_rabi_area_time(0.15, 10, M_PI / 2.0);
    const double t2 = solve_rabi_area_time(0.15, 10, M_PI);
    CHECK(t2 == Approx(2.0 * t1).epsilon(1e-4));
}

TEST_CASE("lz_threshold_time") {
    CHECK(lz_threshold_time(0.0754188, 0.2) == Approx(140.6).epsilon(1e-3));
    CHECK(lz_threshold_time(1.0, 0.25) == Approx(1.0).margin(1e-15));
    CHECK(lz_threshold_time(0.3, 0.4) == Approx(2.0 * lz_threshold_time(0.3, 0.2)).margin(1e-12));
    CHECK_THROWS_AS(lz_threshold_time(0.0, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(lz_threshold_time(0.1, 0.0), std::invalid_argument);
}

TEST_CASE("lz_decoupling_ratio flags weak decoupling") {
    // reference working point: delta0 = 0.2 vs kappa_max = 0.0754
    CHECK(lz_decoupling_ratio({0.1, 0.2, 60.0, 120.0}, 10) > 1.0);
    CHECK(lz_decoupling_ratio({0.1, 0.01, 60.0, 120.0}, 10) < 1.0);
}
