// Time-dependent protocol parameter functions and area-theorem analytics.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <variant>

#include "qst/chain.hpp"

namespace qst {

/// Instantaneous chain parameters (t1, t2, delta) at one time.
struct ScheduleSample {
    double t1;
    double t2;
    double delta;
};

/// Adiabatic Rabi protocol: t1 = 1, delta = 0,
/// t2(t) = (1-eps)/2 * (1 - cos(2 pi t / T)).
struct RabiParams {
    double epsilon;
    double total_time;

    void validate() const {
        if (!(epsilon > 0.0 && epsilon < 1.0))
            throw std::invalid_argument("RabiParams: epsilon must lie in (0,1)");
        if (total_time <= 0.0) throw std::invalid_argument("RabiParams: total time must be > 0");
    }
};

/// Three-stage Landau-Zener protocol: cosine ramp-up of t2 under +delta0,
/// linear sweep of delta from +delta0 to -delta0 at constant t2 = 1-eps,
/// then the mirrored ramp-down under -delta0.
struct LZParams {
    double epsilon;
    double delta0;
    double tau;
    double tau_z;

    double total_time() const { return 2.0 * tau + tau_z; }
    double sweep_rate() const { return 4.0 * delta0 / tau_z; }

    void validate() const {
        if (!(epsilon > 0.0 && epsilon < 1.0))
            throw std::invalid_argument("LZParams: epsilon must lie in (0,1)");
        if (delta0 <= 0.0) throw std::invalid_argument("LZParams: delta0 must be > 0");
        if (tau <= 0.0) throw std::invalid_argument("LZParams: tau must be > 0");
        if (tau_z <= 0.0) throw std::invalid_argument("LZParams: tau_z must be > 0");
    }
};

/// Time-independent parameters held for a duration.
struct StaticParams {
    double t1 = 1.0;
    double t2 = 0.0;
    double delta = 0.0;
    double total_time;

    void validate() const {
        if (t1 <= 0.0) throw std::invalid_argument("StaticParams: t1 must be > 0");
        if (total_time <= 0.0) throw std::invalid_argument("StaticParams: total time must be > 0");
    }
};

enum class ProtocolKind { rabi, lz, fixed };

class ProtocolSchedule {
  public:
    static ProtocolSchedule rabi(RabiParams p) {
        p.validate();
        return ProtocolSchedule(ProtocolKind::rabi, p.total_time, p);
    }
    static ProtocolSchedule lz(LZParams p) {
        p.validate();
        return ProtocolSchedule(ProtocolKind::lz, p.total_time(), p);
    }
    static ProtocolSchedule fixed(StaticParams p) {
        p.validate();
        return ProtocolSchedule(ProtocolKind::fixed, p.total_time, p);
    }

    ProtocolKind kind() const { return kind_; }
    double duration() const { return duration_; }

    const RabiParams& rabi_params() const { return std::get<RabiParams>(params_); }
    const LZParams& lz_params() const { return std::get<LZParams>(params_); }
    const StaticParams& static_params() const { return std::get<StaticParams>(params_); }

    /// Exact branch formulas, no interpolation. Stage boundaries are
    /// half-open with the earlier stage's formula applied at the boundary
    /// (the branches agree there).
    ScheduleSample evaluate(double t) const {
        if (t < 0.0 || t > duration_)
            throw std::domain_error("ProtocolSchedule::evaluate: t outside [0, T]");
        switch (kind_) {
            case ProtocolKind::rabi: {
                const auto& p = std::get<RabiParams>(params_);
                const double t2 =
                    0.5 * (1.0 - p.epsilon) * (1.0 - std::cos(2.0 * M_PI * t / p.total_time));
                return {1.0, t2, 0.0};
            }
            case ProtocolKind::lz: {
                const auto& p = std::get<LZParams>(params_);
                if (t <= p.tau) {
                    const double t2 =
                        0.5 * (1.0 - p.epsilon) * (1.0 - std::cos(M_PI * t / p.tau));
                    return {1.0, t2, p.delta0};
                }
                if (t <= p.tau + p.tau_z) {
                    const double delta = p.delta0 - 0.5 * p.sweep_rate() * (t - p.tau);
                    return {1.0, 1.0 - p.epsilon, delta};
                }
                const double t2 =
                    0.5 * (1.0 - p.epsilon) * (1.0 - std::cos(M_PI * (t - p.tau_z) / p.tau));
                return {1.0, t2, -p.delta0};
            }
            case ProtocolKind::fixed:
            default: {
                const auto& p = std::get<StaticParams>(params_);
                return {p.t1, p.t2, p.delta};
            }
        }
    }

    /// Instantaneous edge-state coupling on a chain of N dimers.
    double kappa_at(double t, int n_dimers) const {
        const ScheduleSample s = evaluate(t);
        return coupling_kappa(ChainSpec{n_dimers, s.t1, s.t2, 0.0});
    }

  private:
    template <class P>
    ProtocolSchedule(ProtocolKind k, double t, P p) : kind_(k), duration_(t), params_(p) {}

    ProtocolKind kind_;
    double duration_;
    std::variant<RabiParams, LZParams, StaticParams> params_;
};

namespace detail {

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double whole, double tol,
                               int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace detail

/// Pulse area integral(0..T) kappa(t) dt by adaptive Simpson quadrature.
/// LZ schedules are integrated stage by stage so the piecewise kinks do
/// not degrade convergence.
inline double area_integral(const ProtocolSchedule& schedule, int n_dimers) {
    auto f = [&](double t) { return schedule.kappa_at(t, n_dimers); };
    const double T = schedule.duration();
    const double tol_scale = 1e-8;
    if (schedule.kind() == ProtocolKind::lz) {
        const auto& p = schedule.lz_params();
        const double a1 = detail::integrate(f, 0.0, p.tau, tol_scale * p.tau);
        const double a2 = detail::integrate(f, p.tau, p.tau + p.tau_z, tol_scale * p.tau_z);
        const double a3 = detail::integrate(f, p.tau + p.tau_z, T, tol_scale * p.tau);
        return a1 + a2 + a3;
    }
    return detail::integrate(f, 0.0, T, tol_scale * T);
}

/// Smallest T for which the Rabi pulse area reaches `target_area`
/// (default pi/2, the area theorem), by bisection on T in [1, 1e5].
inline double solve_rabi_area_time(double epsilon, int n_dimers,
                                   double target_area = M_PI / 2.0) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("solve_rabi_area_time: epsilon must lie in (0,1)");
    auto area_of = [&](double T) {
        return area_integral(ProtocolSchedule::rabi({epsilon, T}), n_dimers);
    };
    double lo = 1.0, hi = 1e5;
    if (area_of(hi) < target_area)
        throw std::runtime_error("solve_rabi_area_time: target area not reachable below T = 1e5");
    while (true) {
        const double mid = 0.5 * (lo + hi);
        const double a = area_of(mid);
        if (std::abs(a - target_area) < 1e-6) return mid;
        (a < target_area ? lo : hi) = mid;
        if (hi - lo < 1e-9 * hi) return 0.5 * (lo + hi);
    }
}

/// Landau-Zener Gamma = 1 threshold, tau_z_min = 4 delta0 / kappa^2.
inline double lz_threshold_time(double kappa_max, double delta0) {
    if (kappa_max <= 0.0) throw std::invalid_argument("lz_threshold_time: kappa must be > 0");
    if (delta0 <= 0.0) throw std::invalid_argument("lz_threshold_time: delta0 must be > 0");
    return 4.0 * delta0 / (kappa_max * kappa_max);
}

/// delta0 / kappa_max for an LZ schedule; the edge states are decoupled
/// in stages I and III only when this ratio is >~ 1.
inline double lz_decoupling_ratio(const LZParams& p, int n_dimers) {
    p.validate();
    const double kappa_max = coupling_kappa(ChainSpec{n_dimers, 1.0, 1.0 - p.epsilon, 0.0});
    return p.delta0 / kappa_max;
}

}  // namespace qst
