#pragma once

// Spectra of the finite-level operators by decimation and by direct
// diagonalization, Julia-set approximations and infinite-operator spectra.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "decimation.hpp"
#include "eigensolver.hpp"
#include "error.hpp"
#include "operators.hpp"

namespace decimate {

enum class Method { Decimation, Direct };

inline constexpr double kSpectrumDedup = 1e-9;

/// Two-sided Hausdorff distance between finite point sets on the line.
inline double hausdorff(std::vector<double> a, std::vector<double> b) {
    require(!a.empty() && !b.empty(), "Hausdorff distance needs nonempty sets");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const auto directed = [](const std::vector<double>& from, const std::vector<double>& to) {
        double worst = 0.0;
        for (double x : from) {
            auto it = std::lower_bound(to.begin(), to.end(), x);
            double best = std::numeric_limits<double>::infinity();
            if (it != to.end()) best = *it - x;
            if (it != to.begin()) best = std::min(best, x - *std::prev(it));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

inline double hausdorff(const SpectrumSet& a, const SpectrumSet& b) { return hausdorff(a.values, b.values); }

/// Preimages under every inverse branch of each point.
inline std::vector<double> pull_back(const DecimationData& d, const std::vector<double>& points) {
    std::vector<double> out(points.size() * d.degree());
    parallel_for(points.size(), [&](std::size_t i) {
        const auto br = d.inverse_branches(points[i]);
        std::copy(br.begin(), br.end(), out.begin() + static_cast<std::ptrdiff_t>(i * d.degree()));
    });
    std::sort(out.begin(), out.end());
    return out;
}

/// sigma(Delta_p^(l)) = {0, 2} u R^{-i}({p, 2-p}) for i < l, or by bisection.
inline SpectrumSet laplacian_spectrum(double p, int level, Method method) {
    check_probability(p);
    require(level >= 0, "level must be nonnegative");
    if (method == Method::Direct) {
        const auto ev = eigenvalues(symmetrize(build_laplacian(p, level, BoundaryCondition::Neumann)));
        return SpectrumSet(ev.values, kSpectrumDedup);
    }
    const auto d = laplacian_decimation(p);
    std::vector<double> all{0.0, 2.0};
    std::vector<double> generation{p, 2.0 - p};
    for (int i = 0; i < level; ++i) {
        all.insert(all.end(), generation.begin(), generation.end());
        if (i + 1 < level) generation = pull_back(d, generation);
    }
    return SpectrumSet(std::move(all), kSpectrumDedup);
}

struct AmoSpectrum {
    SpectrumSet spectrum;
    /// Points of sigma(H^(n)) within 1e-9 of the exceptional set.
    std::vector<double> exceptional_collisions;
};

/// Spectrum of H^(l)_{p,beta,k/3^n,0} together with collision diagnostics.
inline AmoSpectrum amo_spectrum_report(double p, double beta, std::int64_t k, int n, int level, Method method) {
    check_probability(p);
    require(n >= 1 && n <= level, "need 1 <= n <= level");
    require(k >= 0 && k < pow3(n), "k must satisfy 0 <= k < 3^n");
    const Rational alpha(k, pow3(n));
    if (method == Method::Direct) {
        const auto ev = eigenvalues(symmetrize(build_amo(p, beta, alpha, 0.0, level, BoundaryCondition::Neumann)));
        return {SpectrumSet(ev.values, kSpectrumDedup), {}};
    }
    const auto d = amo_decimation(p, beta, k, n);
    const auto cell = eigenvalues(symmetrize(d.cell()));

    AmoSpectrum out;
    for (double v : cell.values)
        for (double e : d.exceptional().values)
            if (std::abs(v - e) <= kSpectrumDedup) out.exceptional_collisions.push_back(v);

    std::vector<double> coarse;
    for (double v : laplacian_spectrum(p, level - n, Method::Decimation).values)
        if (std::abs(v) > kSpectrumDedup && std::abs(v - 2.0) > kSpectrumDedup) coarse.push_back(v);
    auto all = pull_back(d, coarse);
    all.insert(all.end(), cell.values.begin(), cell.values.end());
    out.spectrum = SpectrumSet(std::move(all), kSpectrumDedup);
    return out;
}

inline SpectrumSet amo_spectrum(double p, double beta, std::int64_t k, int n, int level, Method method) {
    return amo_spectrum_report(p, beta, k, n, level, method).spectrum;
}

enum class JuliaMode { FullTree, Stochastic };

struct JuliaApprox {
    std::vector<double> points;  // sorted, duplicates kept
    int depth = 0;
    double seed = 2.0;
    JuliaMode mode = JuliaMode::FullTree;
};

/// Backward orbit of z0 = 2 under R_{Delta_p}. FullTree keeps all 3^depth
/// leaves; Stochastic follows one random branch per step after 20 burn-in
/// steps and records `depth` points.
inline JuliaApprox julia_points(double p, int depth, JuliaMode mode, std::uint64_t rng_seed = 0) {
    check_probability(p);
    require(depth >= 1, "Julia depth must be >= 1");
    const auto d = laplacian_decimation(p);
    JuliaApprox out{{}, depth, 2.0, mode};
    if (mode == JuliaMode::FullTree) {
        require(depth <= 12, "FullTree depth is capped at 12");
        std::vector<double> level{2.0};
        for (int i = 0; i < depth; ++i) level = pull_back(d, level);
        out.points = std::move(level);
        return out;
    }
    std::mt19937_64 rng(rng_seed);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(d.degree()) - 1);
    double z = 2.0;
    for (int i = 0; i < 20; ++i) z = d.inverse_branches(z)[static_cast<std::size_t>(pick(rng))];
    out.points.reserve(static_cast<std::size_t>(depth));
    for (int i = 0; i < depth; ++i) {
        z = d.inverse_branches(z)[static_cast<std::size_t>(pick(rng))];
        out.points.push_back(z);
    }
    std::sort(out.points.begin(), out.points.end());
    return out;
}

/// sigma(H) approximated as the AMO inverse branches of the Julia set of R_{Delta_p}.
inline std::vector<double> amo_spectrum_infinite(double p, double beta, std::int64_t k, int n, int depth) {
    require(n >= 1, "n must be >= 1");
    require(k >= 1 && k <= pow3(n) - 1, "infinite-operator spectrum needs 1 <= k <= 3^n - 1");
    const auto julia = julia_points(p, depth, JuliaMode::FullTree);
    return pull_back(amo_decimation(p, beta, k, n), julia.points);
}

} // namespace decimate
