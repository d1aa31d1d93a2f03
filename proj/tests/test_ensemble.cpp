#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "qst/ensemble.hpp"
#include "qst/io.hpp"

using namespace qst;
using Catch::Approx;

namespace {
const ProtocolSchedule kLZRef = ProtocolSchedule::lz({0.1, 0.2, 60.0, 120.0});
const ProtocolSchedule kRabiRef = ProtocolSchedule::rabi({0.1, 86.0});

EnsembleConfig small_config() {
    EnsembleConfig cfg;
    cfg.n_dimers = 4;
    cfg.kind = DisorderKind::on_diagonal;
    cfg.strength = 0.2;
    cfg.realizations = 16;
    cfg.seed = 31337;
    cfg.bins = 10;
    return cfg;
}
}  // namespace

TEST_CASE("zero disorder collapses the ensemble onto the clean value") {
    auto cfg = small_config();
    cfg.strength = 0.0;
    const auto schedule = ProtocolSchedule::rabi({0.2, 40.0});
    const auto result = run_ensemble(schedule, cfg);
    const double clean = transfer_probability(
        propagate_full(cfg.n_dimers, schedule, nullptr, site_basis_state(2 * cfg.n_dimers)));
    for (double p : result.samples) CHECK(p == Approx(clean).margin(1e-12));
}

TEST_CASE("histogram density integrates to one") {
    const auto result = run_ensemble(ProtocolSchedule::rabi({0.2, 40.0}), small_config());
    double integral = 0.0;
    for (std::size_t b = 0; b < result.histogram.density.size(); ++b)
        integral += result.histogram.density[b] *
                    (result.histogram.edges[b + 1] - result.histogram.edges[b]);
    CHECK(integral == Approx(1.0).margin(1e-9));
    for (double p : result.samples) {
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
    }
    CHECK(result.samples.size() == 16);
}

TEST_CASE("ensemble is bit-identical across thread counts") {
    const auto schedule = ProtocolSchedule::rabi({0.2, 40.0});
    auto cfg = small_config();
    cfg.threads = 1;
    const auto serial = run_ensemble(schedule, cfg);
    cfg.threads = 3;
    const auto parallel = run_ensemble(schedule, cfg);
    REQUIRE(serial.samples.size() == parallel.samples.size());
    for (std::size_t k = 0; k < serial.samples.size(); ++k)
        CHECK(serial.samples[k] == parallel.samples[k]);
    CHECK(serial.summary.mean == parallel.summary.mean);
}

TEST_CASE("paired comparison at zero strength reduces to the clean difference") {
    auto cfg = small_config();
    cfg.strength = 0.0;
    cfg.n_dimers = 4;
    const auto rabi = ProtocolSchedule::rabi({0.2, 40.0});
    const auto lz = ProtocolSchedule::lz({0.2, 0.4, 15.0, 40.0});
    const auto [rabi_result, lz_result] = compare_protocols(rabi, lz, cfg);
    const double rabi_clean = transfer_probability(
        propagate_full(4, rabi, nullptr, site_basis_state(8)));
    const double lz_clean = transfer_probability(
        propagate_full(4, lz, nullptr, site_basis_state(8)));
    for (std::size_t k = 0; k < rabi_result.samples.size(); ++k)
        CHECK(lz_result.samples[k] - rabi_result.samples[k] ==
              Approx(lz_clean - rabi_clean).margin(1e-12));
}

TEST_CASE("mean transfer degrades with diagonal disorder strength") {
    EnsembleConfig cfg;
    cfg.n_dimers = 10;
    cfg.kind = DisorderKind::on_diagonal;
    cfg.realizations = 200;
    cfg.seed = 4242;
    double previous = 1.1;
    for (double strength : {0.2, 0.5, 0.8}) {
        cfg.strength = strength;
        const auto result = run_ensemble(kLZRef, cfg);
        CHECK(result.summary.mean < previous);
        previous = result.summary.mean;
    }
}

TEST_CASE("single-cell sweep equals a direct propagation") {
    const auto result = sweep2d(ProtocolFamily::lz, {"T", {240.0}}, {"delta0", {0.2}},
                                {{"epsilon", 0.1}, {"tau", 60.0}}, 10);
    REQUIRE(result.p.size() == 1);
    REQUIRE(result.p[0].size() == 1);
    const double direct = transfer_probability(
        propagate_full(10, kLZRef, nullptr, site_basis_state(20)));
    CHECK(result.p[0][0] == Approx(direct).margin(1e-12));
}

TEST_CASE("sweep validation") {
    CHECK_THROWS_AS(sweep2d(ProtocolFamily::lz, {"bogus", {1.0}}, {"T", {100.0}},
                            {{"epsilon", 0.1}, {"tau", 20.0}, {"delta0", 0.2}}, 4),
                    std::invalid_argument);
    CHECK_THROWS_AS(sweep2d(ProtocolFamily::lz, {"T", {100.0, 90.0}}, {"delta0", {0.2}},
                            {{"epsilon", 0.1}, {"tau", 20.0}}, 4),
                    std::invalid_argument);
    CHECK_THROWS_AS(sweep2d(ProtocolFamily::rabi, {"delta0", {0.2}}, {"T", {50.0}},
                            {{"epsilon", 0.1}}, 4),
                    std::invalid_argument);
}

TEST_CASE("rabi sweep covers the reference point") {
    const auto result = sweep2d(ProtocolFamily::rabi, {"T", {70.0, 86.0, 100.0}},
                                {"epsilon", {0.1}}, {}, 10);
    // the optimum sits near T = 86
    CHECK(result.p[1][0] > result.p[0][0]);
    CHECK(result.p[1][0] > 0.98);
}

TEST_CASE("scaling study reproduces the reference point at N=10") {
    const auto table = scaling_study(1.3, {10});
    REQUIRE(table.size() == 1);
    CHECK(table[0].params.epsilon == Approx(0.1));
    CHECK(table[0].params.delta0 == Approx(0.2));
    CHECK(table[0].params.tau == Approx(60.0));
    CHECK(table[0].params.tau_z == Approx(120.0));
    const double direct = transfer_probability(
        propagate_full(10, kLZRef, nullptr, site_basis_state(20)));
    CHECK(table[0].p_transfer == Approx(direct).margin(1e-12));
}

TEST_CASE("scaling study validation") {
    CHECK_THROWS_AS(scaling_study(0.5, {10}), std::invalid_argument);
    CHECK_THROWS_AS(scaling_study(1.3, {1}), std::invalid_argument);
    CHECK_THROWS_AS(scaling_study(1.3, {}), std::invalid_argument);
}

TEST_CASE("ensemble export round trip through files") {
    const auto result = run_ensemble(ProtocolSchedule::rabi({0.2, 40.0}), small_config());
    const std::string dir = "ensemble_export_test";
    std::filesystem::create_directories(dir);
    write_samples_csv(dir + "/samples.csv", result.samples);
    write_histogram_csv(dir + "/histogram.csv", result.histogram);
    const json summary = summary_json(result);
    CHECK(summary.at("realizations").get<int>() == 16);
    CHECK(summary.at("mean").get<double>() == Approx(result.summary.mean));
    std::ifstream in(dir + "/samples.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "realization,p2N");
    std::filesystem::remove_all(dir);
}
