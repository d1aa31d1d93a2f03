// Rice-Mele / SSH chain construction and edge-state analytics.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qst/disorder.hpp"

namespace qst {

/// Static description of a dimerized chain with 2N sites.
/// t1 is the inter-dimer hopping (sets the unit of energy), t2 the
/// intra-dimer hopping, delta the staggered on-site energy.
struct ChainSpec {
    int n_dimers = 1;
    double t1 = 1.0;
    double t2 = 0.0;
    double delta = 0.0;

    int sites() const { return 2 * n_dimers; }
    double ratio() const { return t2 / t1; }

    void validate() const {
        if (n_dimers < 1) throw std::invalid_argument("ChainSpec: n_dimers must be >= 1");
        if (t1 <= 0.0) throw std::invalid_argument("ChainSpec: t1 must be > 0");
    }
};

/// Dense 2N x 2N Rice-Mele matrix: staggered +/-delta on the diagonal and
/// alternating t2, t1, t2, ... on the first off-diagonal, starting and
/// ending with t2. An optional static disorder matrix is added entrywise.
inline Eigen::MatrixXd build_hamiltonian(const ChainSpec& spec,
                                         const DisorderRealization* perturbation = nullptr) {
    spec.validate();
    const int n = spec.sites();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) h(i, i) = (i % 2 == 0) ? spec.delta : -spec.delta;
    for (int i = 0; i + 1 < n; ++i) {
        const double hop = (i % 2 == 0) ? spec.t2 : spec.t1;
        h(i, i + 1) = hop;
        h(i + 1, i) = hop;
    }
    if (perturbation) {
        if (perturbation->sites() != n)
            throw std::invalid_argument("build_hamiltonian: disorder dimension " +
                                        std::to_string(perturbation->sites()) +
                                        " does not match chain size " + std::to_string(n));
        h += perturbation->to_matrix();
    }
    return h;
}

enum class EdgeSide { left, right };

/// Exponentially localized mid-gap mode at one end of the chain.
/// The left state lives on the odd (A) sublattice, the right state on the
/// even (B) sublattice; amplitudes decay geometrically with ratio -t2/t1.
struct EdgeState {
    EdgeSide side;
    Eigen::VectorXd amplitudes;
};

namespace detail {
inline void require_topological(const ChainSpec& spec, const char* who) {
    const double r = spec.ratio();
    if (r < 0.0) throw std::domain_error(std::string(who) + ": t2/t1 must be >= 0");
    if (r >= 1.0)
        throw std::domain_error(std::string(who) + ": t2/t1 = " + std::to_string(r) +
                                " is outside the topological phase (requires t2/t1 < 1)");
}
}  // namespace detail

inline EdgeState edge_state(EdgeSide side, const ChainSpec& spec) {
    spec.validate();
    detail::require_topological(spec, "edge_state");
    const int n_sites = spec.sites();
    const int n_dimers = spec.n_dimers;
    const double r = spec.ratio();
    // norm = sqrt((r^2 - 1) / (r^{2N} - 1)); equals 1 at r = 0.
    const double norm = std::sqrt((r * r - 1.0) / (std::pow(r, 2 * n_dimers) - 1.0));
    Eigen::VectorXd amp = Eigen::VectorXd::Zero(n_sites);
    if (side == EdgeSide::left) {
        for (int k = 0; k < n_dimers; ++k) amp(2 * k) = norm * std::pow(-r, k);
    } else {
        for (int k = 0; k < n_dimers; ++k) amp(2 * k + 1) = norm * std::pow(-r, n_dimers - 1 - k);
    }
    return {side, std::move(amp)};
}

/// Hybridization coupling between the two edge states,
/// kappa = t1 r^N (r^2 - 1) / (r^{2N} - 1) with r = t2/t1.
inline double coupling_kappa(const ChainSpec& spec) {
    spec.validate();
    detail::require_topological(spec, "coupling_kappa");
    const double r = spec.ratio();
    if (r == 0.0) return 0.0;
    const int n = spec.n_dimers;
    return spec.t1 * std::pow(r, n) * (r * r - 1.0) / (std::pow(r, 2 * n) - 1.0);
}

/// E+ - E- for the two eigenvalues closest to zero. Brute-force oracle
/// for twice the hybridization coupling.
inline double midgap_splitting(const Eigen::MatrixXd& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    const auto& ev = solver.eigenvalues();
    int best = 0;
    for (int i = 1; i < ev.size(); ++i)
        if (std::abs(ev(i)) < std::abs(ev(best))) best = i;
    int second = best == 0 ? 1 : 0;
    for (int i = 0; i < ev.size(); ++i)
        if (i != best && std::abs(ev(i)) < std::abs(ev(second))) second = i;
    return std::abs(ev(best) - ev(second));
}

/// Edge-state localization length in units of the lattice period,
/// 1 / (2 ln(t1/t2)). Returns 0 in the flat-band limit t2 = 0.
inline double localization_length(const ChainSpec& spec) {
    spec.validate();
    if (spec.t2 == 0.0) return 0.0;
    detail::require_topological(spec, "localization_length");
    return 1.0 / (2.0 * std::log(spec.t1 / spec.t2));
}

/// Static Rabi-flopping transfer time T = pi / (2 kappa).
inline double rabi_transfer_time(double kappa) {
    if (kappa <= 0.0) throw std::domain_error("rabi_transfer_time: kappa must be > 0");
    return M_PI / (2.0 * kappa);
}

}  // namespace qst
