#pragma once

// Parameter sweeps over alpha (Hofstadter butterflies) and beta.

#include <set>
#include <vector>

#include "eigensolver.hpp"
#include "operators.hpp"
#include "parallel.hpp"
#include "rational.hpp"

namespace decimate {

struct SweepRecord {
    double parameter = 0.0;  // alpha, or beta for beta sweeps
    SpectrumSet eigenvalues;
};

/// One direct diagonalization of H^(l)_{p,beta,alpha,theta} per alpha, in grid order.
inline std::vector<SweepRecord> sweep_alpha(double p, double beta, double theta, int level,
                                            const std::vector<Frequency>& grid) {
    require(!grid.empty(), "alpha grid must be nonempty");
    std::vector<SweepRecord> out(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        const auto& a = grid[i];
        const double value = std::holds_alternative<Rational>(a) ? std::get<Rational>(a).value() : std::get<double>(a);
        require(value >= 0.0 && value <= 1.0, "alpha grid values must lie in [0, 1]");
        const auto s = symmetrize(build_amo(p, beta, a, theta, level, BoundaryCondition::Neumann));
        out[i] = {value, eigenvalues(s, default_tolerance(s), false)};
    });
    return out;
}

inline std::vector<SweepRecord> sweep_alpha(double p, double beta, double theta, int level,
                                            const std::vector<double>& grid) {
    return sweep_alpha(p, beta, theta, level, std::vector<Frequency>(grid.begin(), grid.end()));
}

/// Fixed alpha, varying beta.
inline std::vector<SweepRecord> sweep_beta(double p, const Frequency& alpha, double theta, int level,
                                           const std::vector<double>& betas) {
    require(!betas.empty(), "beta grid must be nonempty");
    std::vector<SweepRecord> out(betas.size());
    parallel_for(betas.size(), [&](std::size_t i) {
        const auto s = symmetrize(build_amo(p, betas[i], alpha, theta, level, BoundaryCondition::Neumann));
        out[i] = {betas[i], eigenvalues(s, default_tolerance(s), false)};
    });
    return out;
}

/// { k/3^n : n <= n_max, 0 <= k < 3^n } in lowest terms, ascending.
inline std::vector<Rational> triadic_alphas(int n_max) {
    require(n_max >= 1 && n_max <= 20, "n_max must lie in [1, 20]");
    std::set<Rational> s;
    for (int n = 1; n <= n_max; ++n)
        for (std::int64_t k = 0; k < pow3(n); ++k) s.insert(Rational(k, pow3(n)));
    return {s.begin(), s.end()};
}

/// `count` equally spaced alphas on [0, 1].
inline std::vector<double> uniform_alphas(std::size_t count) {
    require(count >= 1, "need at least one alpha");
    std::vector<double> g(count, 0.0);
    for (std::size_t i = 0; i < count && count > 1; ++i) g[i] = static_cast<double>(i) / static_cast<double>(count - 1);
    return g;
}

} // namespace decimate
