// Schroedinger propagation of the full chain and of the reduced two-level
// model, plus fidelity and Landau-Zener analytics.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "qst/chain.hpp"
#include "qst/disorder.hpp"
#include "qst/schedule.hpp"

namespace qst {

using Complex = std::complex<double>;
using StateVector = Eigen::VectorXcd;

/// Integration knobs. The time step is chosen so that
/// dt * (spectral norm bound of H) <= budget.
struct StepControl {
    double budget = 0.02;
    int recording_samples = 500;
    bool record_sites = false;
};

/// Sampled occupation probabilities of the sender and receiver sites plus
/// the final state. Site-resolved recording is opt-in.
struct Trajectory {
    std::vector<double> times;
    std::vector<double> p_first;
    std::vector<double> p_last;
    std::vector<std::vector<double>> site_occupations;
    StateVector final_state;
};

inline StateVector site_basis_state(int n_sites, int site_index = 0) {
    StateVector c = StateVector::Zero(n_sites);
    c(site_index) = 1.0;
    return c;
}

namespace detail {

inline void check_step_inputs(const StateVector& initial, const StepControl& sc) {
    if (sc.budget <= 0.0) throw std::invalid_argument("StepControl: budget must be > 0");
    if (sc.recording_samples < 2)
        throw std::invalid_argument("StepControl: need at least 2 recording samples");
    if (std::abs(initial.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("propagate: initial state is not normalized");
}

/// Gershgorin-style bound on ||H(t)|| over the whole schedule.
inline double schedule_norm_bound(const ProtocolSchedule& schedule) {
    switch (schedule.kind()) {
        case ProtocolKind::rabi:
            return 1.0 + (1.0 - schedule.rabi_params().epsilon);
        case ProtocolKind::lz: {
            const auto& p = schedule.lz_params();
            return 1.0 + (1.0 - p.epsilon) + p.delta0;
        }
        case ProtocolKind::fixed:
        default: {
            const auto& p = schedule.static_params();
            return p.t1 + p.t2 + std::abs(p.delta);
        }
    }
}

/// y = T x for a symmetric tridiagonal T given by its diagonal and
/// first off-diagonal.
inline void tridiag_apply(const std::vector<double>& diag, const std::vector<double>& off,
                          const StateVector& x, StateVector& y) {
    const int n = static_cast<int>(diag.size());
    for (int i = 0; i < n; ++i) {
        Complex v = diag[static_cast<std::size_t>(i)] * x(i);
        if (i > 0) v += off[static_cast<std::size_t>(i - 1)] * x(i - 1);
        if (i + 1 < n) v += off[static_cast<std::size_t>(i)] * x(i + 1);
        y(i) = v;
    }
}

/// c <- exp(-i T dt) c by a truncated Taylor series. For dt ||T|| at the
/// default budget the series terminates after a handful of terms with the
/// truncation error below 1e-18 per step, so unitarity holds to rounding.
inline void apply_exponential(const std::vector<double>& diag, const std::vector<double>& off,
                              double dt, StateVector& c, StateVector& term, StateVector& scratch) {
    const Complex factor(0.0, -dt);
    term = c;
    for (int j = 1; j <= 64; ++j) {
        tridiag_apply(diag, off, term, scratch);
        term = (factor / static_cast<double>(j)) * scratch;
        c += term;
        if (term.squaredNorm() < 1e-36) break;
    }
}

struct Recorder {
    explicit Recorder(int n_steps, double dt, const StepControl& sc)
        : dt_(dt), n_steps_(n_steps), samples_(sc.recording_samples), record_sites_(sc.record_sites) {}

    void maybe_record(int step, const StateVector& c, Trajectory& traj) {
        const long long target =
            (static_cast<long long>(next_) * n_steps_ + (samples_ - 1) / 2) / (samples_ - 1);
        if (step != target) return;
        ++next_;
        traj.times.push_back(step * dt_);
        traj.p_first.push_back(std::norm(c(0)));
        traj.p_last.push_back(std::norm(c(c.size() - 1)));
        if (record_sites_) {
            std::vector<double> occ(static_cast<std::size_t>(c.size()));
            for (int i = 0; i < c.size(); ++i) occ[static_cast<std::size_t>(i)] = std::norm(c(i));
            traj.site_occupations.push_back(std::move(occ));
        }
        // collapse duplicate targets at coarse step counts
        while (next_ < samples_ &&
               (static_cast<long long>(next_) * n_steps_ + (samples_ - 1) / 2) / (samples_ - 1) ==
                   target)
            ++next_;
    }

    double dt_;
    long long n_steps_;
    int samples_;
    bool record_sites_;
    int next_ = 0;
};

}  // namespace detail

/// Integrate i dc/dt = (H(t) + dH) c from 0 to T with a per-step unitary
/// midpoint-exponential propagator. H(t) is rebuilt from the schedule at
/// each step midpoint; the optional disorder matrix is static.
inline Trajectory propagate_full(int n_dimers, const ProtocolSchedule& schedule,
                                 const DisorderRealization* perturbation,
                                 const StateVector& initial, const StepControl& sc = {}) {
    if (n_dimers < 1) throw std::invalid_argument("propagate_full: n_dimers must be >= 1");
    detail::check_step_inputs(initial, sc);
    const int n = 2 * n_dimers;
    if (initial.size() != n)
        throw std::invalid_argument("propagate_full: initial state dimension mismatch");
    if (perturbation && perturbation->sites() != n)
        throw std::invalid_argument("propagate_full: disorder dimension mismatch");

    double bound = detail::schedule_norm_bound(schedule);
    std::vector<double> dis_diag(static_cast<std::size_t>(n), 0.0);
    std::vector<double> dis_off(static_cast<std::size_t>(n - 1), 0.0);
    if (perturbation) {
        bound += perturbation->norm_bound();
        if (perturbation->kind == DisorderKind::on_diagonal) {
            for (int i = 0; i < n; ++i) dis_diag[static_cast<std::size_t>(i)] = perturbation->values[static_cast<std::size_t>(i)];
        } else {
            for (int j = 0; j + 1 < n_dimers; ++j)
                dis_off[static_cast<std::size_t>(2 * j + 1)] = perturbation->values[static_cast<std::size_t>(j)];
        }
    }

    const double T = schedule.duration();
    const long long n_steps = std::max<long long>(1, static_cast<long long>(std::ceil(T * bound / sc.budget)));
    const double dt = T / static_cast<double>(n_steps);

    std::vector<double> diag(static_cast<std::size_t>(n));
    std::vector<double> off(static_cast<std::size_t>(n - 1));
    StateVector c = initial, term(n), scratch(n);

    Trajectory traj;
    detail::Recorder rec(static_cast<int>(n_steps), dt, sc);
    rec.maybe_record(0, c, traj);
    for (long long s = 0; s < n_steps; ++s) {
        const ScheduleSample p = schedule.evaluate((static_cast<double>(s) + 0.5) * dt);
        for (int i = 0; i < n; ++i)
            diag[static_cast<std::size_t>(i)] =
                ((i % 2 == 0) ? p.delta : -p.delta) + dis_diag[static_cast<std::size_t>(i)];
        for (int i = 0; i + 1 < n; ++i)
            off[static_cast<std::size_t>(i)] =
                ((i % 2 == 0) ? p.t2 : p.t1) + dis_off[static_cast<std::size_t>(i)];
        detail::apply_exponential(diag, off, dt, c, term, scratch);
        rec.maybe_record(static_cast<int>(s + 1), c, traj);
    }
    traj.final_state = std::move(c);
    return traj;
}

/// Integrate the reduced model i da_L/dt = delta a_L + kappa a_R,
/// i da_R/dt = -delta a_R + kappa a_L with the instantaneous kappa(t),
/// delta(t) of the schedule. The 2x2 step exponential is closed-form.
inline Trajectory propagate_two_level(const ProtocolSchedule& schedule, int n_dimers,
                                      const StateVector& initial, const StepControl& sc = {}) {
    if (n_dimers < 1) throw std::invalid_argument("propagate_two_level: n_dimers must be >= 1");
    detail::check_step_inputs(initial, sc);
    if (initial.size() != 2)
        throw std::invalid_argument("propagate_two_level: initial state must have 2 components");

    const double T = schedule.duration();
    // kappa is bounded by its value at the maximal t2 of the schedule
    double kappa_bound = 0.0;
    switch (schedule.kind()) {
        case ProtocolKind::rabi:
            kappa_bound = coupling_kappa(
                ChainSpec{n_dimers, 1.0, 1.0 - schedule.rabi_params().epsilon, 0.0});
            break;
        case ProtocolKind::lz:
            kappa_bound =
                coupling_kappa(ChainSpec{n_dimers, 1.0, 1.0 - schedule.lz_params().epsilon, 0.0});
            break;
        case ProtocolKind::fixed: {
            const auto& p = schedule.static_params();
            kappa_bound = coupling_kappa(ChainSpec{n_dimers, p.t1, p.t2, 0.0});
            break;
        }
    }
    double delta_bound = 0.0;
    if (schedule.kind() == ProtocolKind::lz) delta_bound = schedule.lz_params().delta0;
    if (schedule.kind() == ProtocolKind::fixed)
        delta_bound = std::abs(schedule.static_params().delta);
    const double bound = std::max(kappa_bound + delta_bound, 1e-12);

    const long long n_steps = std::max<long long>(1, static_cast<long long>(std::ceil(T * bound / sc.budget)));
    const double dt = T / static_cast<double>(n_steps);

    StateVector a = initial;
    Trajectory traj;
    detail::Recorder rec(static_cast<int>(n_steps), dt, sc);
    rec.maybe_record(0, a, traj);
    for (long long s = 0; s < n_steps; ++s) {
        const double t_mid = (static_cast<double>(s) + 0.5) * dt;
        const ScheduleSample p = schedule.evaluate(t_mid);
        const double kappa = coupling_kappa(ChainSpec{n_dimers, p.t1, p.t2, 0.0});
        const double delta = p.delta;
        const double omega = std::hypot(delta, kappa);
        // exp(-i H dt) = cos(w dt) I - i sin(w dt)/w H, H = [[d, k], [k, -d]]
        Complex a_l = a(0), a_r = a(1);
        if (omega > 0.0) {
            const double cw = std::cos(omega * dt);
            const double sw = std::sin(omega * dt) / omega;
            const Complex mi(0.0, -1.0);
            a(0) = cw * a_l + mi * sw * (delta * a_l + kappa * a_r);
            a(1) = cw * a_r + mi * sw * (kappa * a_l - delta * a_r);
        }
        rec.maybe_record(static_cast<int>(s + 1), a, traj);
    }
    traj.final_state = std::move(a);
    return traj;
}

/// Receiver occupation at the end of the run: |c_2N(T)|^2 for the full
/// model, |a_R(T)|^2 for the reduced one.
inline double transfer_probability(const Trajectory& traj) {
    return std::norm(traj.final_state(traj.final_state.size() - 1));
}

/// Input-state-averaged fidelity 1/2 + |f|/3 + |f|^2/6.
inline double average_fidelity(double transfer_amplitude_modulus) {
    if (transfer_amplitude_modulus < 0.0 || transfer_amplitude_modulus > 1.0 + 1e-12)
        throw std::domain_error("average_fidelity: |f| must lie in [0, 1]");
    const double f = transfer_amplitude_modulus;
    return 0.5 + f / 3.0 + f * f / 6.0;
}

/// Landau-Zener transition probability 1 - exp(-2 pi Gamma),
/// Gamma = kappa^2 tau_z / (4 delta0).
inline double lz_analytic_probability(double kappa, double delta0, double tau_z) {
    if (kappa <= 0.0 || delta0 <= 0.0 || tau_z < 0.0)
        throw std::invalid_argument("lz_analytic_probability: inputs must be positive");
    const double gamma = kappa * kappa * tau_z / (4.0 * delta0);
    return 1.0 - std::exp(-2.0 * M_PI * gamma);
}

}  // namespace qst
