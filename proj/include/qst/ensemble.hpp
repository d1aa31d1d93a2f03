// Disorder Monte Carlo, paired protocol comparison, 2-D parameter sweeps
// and chain-length scaling studies.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qst/dynamics.hpp"

namespace qst {

struct HistogramDensity {
    std::vector<double> edges;    // B+1 edges on [0, 1]
    std::vector<double> density;  // normalized so sum(density * width) = 1
};

struct EnsembleSummary {
    double mean = 0.0;
    double median = 0.0;
    double fraction_above_090 = 0.0;
    double fraction_above_095 = 0.0;
};

struct EnsembleConfig {
    int n_dimers = 10;
    DisorderKind kind = DisorderKind::on_diagonal;
    double strength = 0.0;
    int realizations = 1000;
    std::uint64_t seed = 0;
    int bins = 100;
    int threads = 1;
    StepControl step;
};

struct EnsembleResult {
    std::vector<double> samples;  // p_2N per realization, indexed by realization
    HistogramDensity histogram;
    EnsembleSummary summary;
    EnsembleConfig config;
};

namespace detail {

inline HistogramDensity make_histogram(const std::vector<double>& samples, int bins) {
    HistogramDensity h;
    const double width = 1.0 / bins;
    h.edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int b = 0; b <= bins; ++b) h.edges[static_cast<std::size_t>(b)] = b * width;
    std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
    for (double p : samples) {
        int b = static_cast<int>(p * bins);
        if (b >= bins) b = bins - 1;
        if (b < 0) b = 0;
        ++counts[static_cast<std::size_t>(b)];
    }
    h.density.resize(static_cast<std::size_t>(bins));
    const double scale = 1.0 / (static_cast<double>(samples.size()) * width);
    for (int b = 0; b < bins; ++b)
        h.density[static_cast<std::size_t>(b)] = static_cast<double>(counts[static_cast<std::size_t>(b)]) * scale;
    return h;
}

inline EnsembleSummary summarize(std::vector<double> samples) {
    EnsembleSummary s;
    const double m = static_cast<double>(samples.size());
    for (double p : samples) {
        s.mean += p;
        if (p > 0.9) s.fraction_above_090 += 1.0;
        if (p > 0.95) s.fraction_above_095 += 1.0;
    }
    s.mean /= m;
    s.fraction_above_090 /= m;
    s.fraction_above_095 /= m;
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    s.median = (n % 2 == 1) ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
    return s;
}

inline DisorderRealization sample_disorder(DisorderKind kind, double strength, int n_dimers,
                                           std::uint64_t seed, std::uint64_t index) {
    return kind == DisorderKind::off_diagonal ? sample_offdiagonal(strength, n_dimers, seed, index)
                                              : sample_diagonal(strength, n_dimers, seed, index);
}

/// Run `count` independent jobs on an unordered work queue; results are
/// written by index, so the outcome is independent of scheduling order.
template <class Job>
inline void parallel_for_index(int count, int threads, Job&& job) {
    if (threads <= 1) {
        for (int k = 0; k < count; ++k) job(k);
        return;
    }
    std::atomic<int> next(0);
    auto worker = [&] {
        for (int k = next.fetch_add(1); k < count; k = next.fetch_add(1)) job(k);
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

}  // namespace detail

/// Monte Carlo disorder study: one frozen realization per index, one full
/// propagation each, samples collected by index. Deterministic for a given
/// seed regardless of thread count.
inline EnsembleResult run_ensemble(const ProtocolSchedule& protocol, const EnsembleConfig& cfg) {
    if (cfg.realizations < 1) throw std::invalid_argument("run_ensemble: need at least 1 realization");
    if (cfg.bins < 1) throw std::invalid_argument("run_ensemble: need at least 1 histogram bin");

    EnsembleResult result;
    result.config = cfg;
    result.samples.assign(static_cast<std::size_t>(cfg.realizations), 0.0);
    std::atomic<int> failed(-1);
    detail::parallel_for_index(cfg.realizations, cfg.threads, [&](int k) {
        try {
            const DisorderRealization dis = detail::sample_disorder(
                cfg.kind, cfg.strength, cfg.n_dimers, cfg.seed, static_cast<std::uint64_t>(k));
            StepControl sc = cfg.step;
            sc.record_sites = false;
            const Trajectory traj = propagate_full(cfg.n_dimers, protocol, &dis,
                                                   site_basis_state(2 * cfg.n_dimers), sc);
            result.samples[static_cast<std::size_t>(k)] = transfer_probability(traj);
        } catch (...) {
            failed.store(k);
        }
    });
    if (failed.load() >= 0)
        throw std::runtime_error("run_ensemble: propagation failed at realization " +
                                 std::to_string(failed.load()));
    result.histogram = detail::make_histogram(result.samples, cfg.bins);
    result.summary = detail::summarize(result.samples);
    return result;
}

/// Run two protocols against identical per-realization disorder matrices
/// (paired seeds), so differences are attributable to the protocol alone.
inline std::pair<EnsembleResult, EnsembleResult> compare_protocols(
    const ProtocolSchedule& rabi_protocol, const ProtocolSchedule& lz_protocol,
    const EnsembleConfig& cfg) {
    // paired seeding falls out of the substream scheme: both ensembles draw
    // realization k from (seed, k)
    return {run_ensemble(rabi_protocol, cfg), run_ensemble(lz_protocol, cfg)};
}

struct SweepAxis {
    std::string name;
    std::vector<double> grid;
};

struct SweepResult {
    SweepAxis axis1;
    SweepAxis axis2;
    std::vector<std::vector<double>> p;  // p[i][j] at (axis1[i], axis2[j])
};

enum class ProtocolFamily { rabi, lz };

namespace detail {

inline ProtocolSchedule make_family_schedule(ProtocolFamily family,
                                             const std::map<std::string, double>& params) {
    auto get = [&](const std::string& name) {
        auto it = params.find(name);
        if (it == params.end())
            throw std::invalid_argument("sweep2d: missing parameter '" + name + "'");
        return it->second;
    };
    if (family == ProtocolFamily::rabi)
        return ProtocolSchedule::rabi({get("epsilon"), get("T")});
    const double tau = get("tau");
    const double tau_z = params.count("T") ? get("T") - 2.0 * tau : get("tau_Z");
    return ProtocolSchedule::lz({get("epsilon"), get("delta0"), tau, tau_z});
}

inline void check_axis(ProtocolFamily family, const SweepAxis& axis) {
    static const std::vector<std::string> rabi_names = {"T", "epsilon"};
    static const std::vector<std::string> lz_names = {"T", "delta0", "epsilon", "tau", "tau_Z"};
    const auto& names = family == ProtocolFamily::rabi ? rabi_names : lz_names;
    bool known = false;
    for (const auto& n : names) known = known || n == axis.name;
    if (!known) throw std::invalid_argument("sweep2d: unknown parameter name '" + axis.name + "'");
    if (axis.grid.empty()) throw std::invalid_argument("sweep2d: empty grid for '" + axis.name + "'");
    for (std::size_t i = 1; i < axis.grid.size(); ++i)
        if (!(axis.grid[i] > axis.grid[i - 1]))
            throw std::invalid_argument("sweep2d: grid for '" + axis.name +
                                        "' must be strictly increasing");
}

}  // namespace detail

/// Disorder-free transfer probability on a 2-D parameter grid. Cells run
/// independently on the work queue and are stored by index.
inline SweepResult sweep2d(ProtocolFamily family, const SweepAxis& axis1, const SweepAxis& axis2,
                           const std::map<std::string, double>& fixed_params, int n_dimers,
                           const StepControl& sc = {}, int threads = 1) {
    detail::check_axis(family, axis1);
    detail::check_axis(family, axis2);
    SweepResult result;
    result.axis1 = axis1;
    result.axis2 = axis2;
    const int rows = static_cast<int>(axis1.grid.size());
    const int cols = static_cast<int>(axis2.grid.size());
    result.p.assign(static_cast<std::size_t>(rows),
                    std::vector<double>(static_cast<std::size_t>(cols), 0.0));
    std::atomic<int> failed(-1);
    detail::parallel_for_index(rows * cols, threads, [&](int cell) {
        const int i = cell / cols, j = cell % cols;
        try {
            auto params = fixed_params;
            params[axis1.name] = axis1.grid[static_cast<std::size_t>(i)];
            params[axis2.name] = axis2.grid[static_cast<std::size_t>(j)];
            const ProtocolSchedule sched = detail::make_family_schedule(family, params);
            const Trajectory traj =
                propagate_full(n_dimers, sched, nullptr, site_basis_state(2 * n_dimers), sc);
            result.p[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                transfer_probability(traj);
        } catch (...) {
            failed.store(cell);
        }
    });
    if (failed.load() >= 0)
        throw std::runtime_error("sweep2d: propagation failed at cell " +
                                 std::to_string(failed.load()));
    return result;
}

struct ScalingPoint {
    int n_dimers;
    double p_transfer;
    LZParams params;
};

/// Chain-length scaling of the LZ protocol: for each N the schedule is
/// derived from the rule eps = 1/N, delta0 = 2/N, tau = 60 (N/10)^rho,
/// T = 240 (N/10)^rho with tau_Z = T - 2 tau. At N = 10 this reproduces
/// the reference working point (eps = 0.1, delta0 = 0.2, tau = 60, T = 240).
inline std::vector<ScalingPoint> scaling_study(double rho, const std::vector<int>& sizes,
                                               const StepControl& sc = {}, int threads = 1) {
    if (rho < 1.0) throw std::invalid_argument("scaling_study: rho must be >= 1");
    if (sizes.empty()) throw std::invalid_argument("scaling_study: need at least one size");
    for (int n : sizes)
        if (n < 2) throw std::invalid_argument("scaling_study: sizes must be >= 2");
    std::vector<ScalingPoint> table(sizes.size());
    std::atomic<int> failed(-1);
    detail::parallel_for_index(static_cast<int>(sizes.size()), threads, [&](int idx) {
        try {
            const int n = sizes[static_cast<std::size_t>(idx)];
            if (n < 2) throw std::invalid_argument("scaling_study: sizes must be >= 2");
            const double scale = std::pow(n / 10.0, rho);
            LZParams p;
            p.epsilon = 1.0 / n;
            p.delta0 = 2.0 / n;
            p.tau = 60.0 * scale;
            p.tau_z = 240.0 * scale - 2.0 * p.tau;
            if (p.tau_z <= 0.0) throw std::invalid_argument("scaling_study: derived tau_Z <= 0");
            const Trajectory traj = propagate_full(n, ProtocolSchedule::lz(p), nullptr,
                                                   site_basis_state(2 * n), sc);
            table[static_cast<std::size_t>(idx)] = {n, transfer_probability(traj), p};
        } catch (...) {
            failed.store(idx);
        }
    });
    if (failed.load() >= 0)
        throw std::runtime_error("scaling_study: run failed for sizes[" +
                                 std::to_string(failed.load()) + "]");
    return table;
}

}  // namespace qst
