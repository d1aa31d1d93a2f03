#include <catch_amalgamated.hpp>

#include "qst/dynamics.hpp"

using namespace qst;
using Catch::Approx;

namespace {
const ProtocolSchedule kRabiRef = ProtocolSchedule::rabi({0.1, 86.0});
const ProtocolSchedule kLZRef = ProtocolSchedule::lz({0.1, 0.2, 60.0, 120.0});
}  // namespace

TEST_CASE("two-site chain matches the analytic Rabi solution") {
    // |c2(t)|^2 = sin^2(t2 t) for a static two-site chain
    for (double t_final : {1.0, 5.0, 17.3}) {
        const auto traj = propagate_full(1, ProtocolSchedule::fixed({1.0, 0.4, 0.0, t_final}),
                                         nullptr, site_basis_state(2));
        CHECK(transfer_probability(traj) ==
              Approx(std::pow(std::sin(0.4 * t_final), 2)).margin(1e-8));
    }
}

TEST_CASE("disorder-free Rabi benchmark") {
    const auto traj = propagate_full(10, kRabiRef, nullptr, site_basis_state(20));
    CHECK(transfer_probability(traj) == Approx(0.995).margin(0.01));
}

TEST_CASE("disorder-free LZ benchmark") {
    const auto traj = propagate_full(10, kLZRef, nullptr, site_basis_state(20));
    CHECK(transfer_probability(traj) == Approx(0.995).margin(0.01));
}

TEST_CASE("unitarity over the long LZ run") {
    const auto traj = propagate_full(10, kLZRef, nullptr, site_basis_state(20));
    CHECK(std::abs(traj.final_state.norm() - 1.0) < 1e-9);
}

TEST_CASE("step halving leaves the transfer probability unchanged") {
    StepControl fine;
    fine.budget = 0.01;
    for (const auto& schedule : {kRabiRef, kLZRef}) {
        const double coarse = transfer_probability(
            propagate_full(10, schedule, nullptr, site_basis_state(20)));
        const double halved = transfer_probability(
            propagate_full(10, schedule, nullptr, site_basis_state(20), fine));
        CHECK(std::abs(coarse - halved) <= 1e-6);
    }
}

TEST_CASE("mirror symmetry of the disorder-free Rabi run") {
    const auto forward = propagate_full(10, kRabiRef, nullptr, site_basis_state(20, 0));
    const auto backward = propagate_full(10, kRabiRef, nullptr, site_basis_state(20, 19));
    CHECK(std::norm(backward.final_state(0)) ==
          Approx(transfer_probability(forward)).margin(1e-9));
}

TEST_CASE("trajectory recording is consistent with the final state") {
    StepControl sc;
    sc.recording_samples = 100;
    const auto traj = propagate_full(10, kRabiRef, nullptr, site_basis_state(20), sc);
    REQUIRE(traj.times.size() == 100);
    CHECK(traj.times.front() == 0.0);
    CHECK(traj.times.back() == Approx(86.0).margin(1e-9));
    CHECK(traj.p_last.back() == Approx(transfer_probability(traj)).margin(1e-12));
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        CHECK(traj.p_first[k] >= 0.0);
        CHECK(traj.p_first[k] <= 1.0);
        CHECK(traj.p_last[k] >= 0.0);
        CHECK(traj.p_last[k] <= 1.0);
    }
}

TEST_CASE("site-resolved recording sums to one") {
    StepControl sc;
    sc.recording_samples = 20;
    sc.record_sites = true;
    const auto traj = propagate_full(4, ProtocolSchedule::rabi({0.2, 30.0}), nullptr,
                                     site_basis_state(8), sc);
    REQUIRE(traj.site_occupations.size() == 20);
    for (const auto& occ : traj.site_occupations) {
        double sum = 0.0;
        for (double p : occ) sum += p;
        CHECK(sum == Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("propagate_full input validation") {
    StateVector bad = StateVector::Zero(20);
    bad(0) = 0.5;
    CHECK_THROWS_AS(propagate_full(10, kRabiRef, nullptr, bad), std::invalid_argument);
    StepControl sc;
    sc.budget = 0.0;
    CHECK_THROWS_AS(propagate_full(10, kRabiRef, nullptr, site_basis_state(20), sc),
                    std::invalid_argument);
    CHECK_THROWS_AS(propagate_full(9, kRabiRef, nullptr, site_basis_state(20)),
                    std::invalid_argument);
}

TEST_CASE("two-level constant coupling swaps the edge amplitudes") {
    // delta = 0, kappa = t2 for N = 1; at T = pi/(2 kappa) the state is (0, -i)
    const double kappa = 0.4;
    const auto traj = propagate_two_level(
        ProtocolSchedule::fixed({1.0, kappa, 0.0, M_PI / (2.0 * kappa)}), 1,
        site_basis_state(2));
    CHECK(std::abs(traj.final_state(0)) < 1e-8);
    CHECK(std::abs(traj.final_state(1) - Complex(0.0, -1.0)) < 1e-8);
}

TEST_CASE("two-level Rabi tracks the full model") {
    const double full = transfer_probability(
        propagate_full(10, kRabiRef, nullptr, site_basis_state(20)));
    const double reduced = transfer_probability(
        propagate_two_level(kRabiRef, 10, site_basis_state(2)));
    CHECK(std::abs(full - reduced) < 0.15);

    // larger epsilon: the reduced model gets more accurate
    const auto wide = ProtocolSchedule::rabi({0.2, 196.0});
    const double full2 = transfer_probability(
        propagate_full(10, wide, nullptr, site_basis_state(20)));
    const double reduced2 = transfer_probability(
        propagate_two_level(wide, 10, site_basis_state(2)));
    CHECK(std::abs(full2 - reduced2) < std::abs(full - reduced));
}

TEST_CASE("transfer_probability end states") {
    Trajectory traj;
    traj.final_state = site_basis_state(20, 19);
    CHECK(transfer_probability(traj) == 1.0);
    traj.final_state = site_basis_state(20, 0);
    CHECK(transfer_probability(traj) == 0.0);
}

TEST_CASE("average_fidelity") {
    CHECK(average_fidelity(1.0) == Approx(1.0).margin(1e-15));
    CHECK(average_fidelity(0.0) == Approx(0.5).margin(1e-15));
    CHECK(average_fidelity(std::sqrt(0.995)) == Approx(0.99833).margin(1e-5));
    CHECK_THROWS_AS(average_fidelity(1.1), std::domain_error);
    CHECK_THROWS_AS(average_fidelity(-0.1), std::domain_error);
    // monotone increasing on [0, 1]
    double prev = average_fidelity(0.0);
    for (double f = 0.05; f <= 1.0; f += 0.05) {
        const double cur = average_fidelity(f);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("lz_analytic_probability") {
    CHECK(lz_analytic_probability(0.1, 0.2, 0.0) == 0.0);
    // 2 pi Gamma = ln 2 -> probability 1/2
    const double kappa = 0.1, delta0 = 0.2;
    const double tau_z = std::log(2.0) / (2.0 * M_PI) * 4.0 * delta0 / (kappa * kappa);
    CHECK(lz_analytic_probability(kappa, delta0, tau_z) == Approx(0.5).margin(1e-12));
    CHECK(lz_analytic_probability(0.0754188, 0.2, 120.0) == Approx(0.9953).margin(2e-4));
    CHECK_THROWS_AS(lz_analytic_probability(-1.0, 0.2, 10.0), std::invalid_argument);
}
