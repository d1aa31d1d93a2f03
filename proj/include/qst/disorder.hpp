// Frozen random perturbation matrices with reproducible substream seeding.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace qst {

enum class DisorderKind { off_diagonal, on_diagonal };

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Substream seed for realization `index` of master stream `seed`.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x2545f4914f6cdd1dULL));
}

}  // namespace detail

/// A static additive perturbation dH, frozen for the whole run.
/// Off-diagonal disorder carries N-1 bond values on the inter-dimer (t1)
/// bonds; on-diagonal disorder carries 2N site energies.
struct DisorderRealization {
    DisorderKind kind = DisorderKind::on_diagonal;
    double strength = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t index = 0;
    int n_dimers = 1;
    std::vector<double> values;

    int sites() const { return 2 * n_dimers; }

    Eigen::MatrixXd to_matrix() const {
        const int n = sites();
        Eigen::MatrixXd dh = Eigen::MatrixXd::Zero(n, n);
        if (kind == DisorderKind::off_diagonal) {
            // bond j couples paper sites (2j+2, 2j+3), i.e. 0-based (2j+1, 2j+2)
            for (int j = 0; j < n_dimers - 1; ++j) {
                dh(2 * j + 1, 2 * j + 2) = values[static_cast<std::size_t>(j)];
                dh(2 * j + 2, 2 * j + 1) = values[static_cast<std::size_t>(j)];
            }
        } else {
            for (int i = 0; i < n; ++i) dh(i, i) = values[static_cast<std::size_t>(i)];
        }
        return dh;
    }

    /// Upper bound on the spectral norm contribution (Gershgorin row sums).
    double norm_bound() const {
        double b = 0.0;
        if (kind == DisorderKind::off_diagonal) {
            for (double v : values) b = std::max(b, 2.0 * std::abs(v));
        } else {
            for (double v : values) b = std::max(b, std::abs(v));
        }
        return b;
    }
};

namespace detail {

inline std::vector<double> draw_uniform_open(double strength, int count,
                                             std::uint64_t seed, std::uint64_t index) {
    std::vector<double> out(static_cast<std::size_t>(count), 0.0);
    if (strength == 0.0) return out;
    std::mt19937_64 rng(substream_seed(seed, index));
    std::uniform_real_distribution<double> dist(-strength, strength);
    for (auto& v : out) {
        do {
            v = dist(rng);
        } while (std::abs(v) >= strength);  // open interval
    }
    return out;
}

}  // namespace detail

/// N-1 uniform bond perturbations in (-sigma, sigma) on the t1 bonds.
inline DisorderRealization sample_offdiagonal(double sigma, int n_dimers,
                                              std::uint64_t seed, std::uint64_t index) {
    if (sigma < 0.0) throw std::invalid_argument("sample_offdiagonal: strength must be >= 0");
    if (n_dimers < 1) throw std::invalid_argument("sample_offdiagonal: n_dimers must be >= 1");
    DisorderRealization d;
    d.kind = DisorderKind::off_diagonal;
    d.strength = sigma;
    d.seed = seed;
    d.index = index;
    d.n_dimers = n_dimers;
    d.values = detail::draw_uniform_open(sigma, n_dimers - 1, seed, index);
    return d;
}

/// 2N uniform site-energy perturbations in (-dE, dE).
inline DisorderRealization sample_diagonal(double de, int n_dimers,
                                           std::uint64_t seed, std::uint64_t index) {
    if (de < 0.0) throw std::invalid_argument("sample_diagonal: strength must be >= 0");
    if (n_dimers < 1) throw std::invalid_argument("sample_diagonal: n_dimers must be >= 1");
    DisorderRealization d;
    d.kind = DisorderKind::on_diagonal;
    d.strength = de;
    d.seed = seed;
    d.index = index;
    d.n_dimers = n_dimers;
    d.values = detail::draw_uniform_open(de, 2 * n_dimers, seed, index);
    return d;
}

}  // namespace qst
