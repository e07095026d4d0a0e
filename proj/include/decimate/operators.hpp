#pragma once

// Finite-level p-Laplacians and self-similar almost Mathieu operators as
// three-band matrices, their Dirichlet restrictions and pi-symmetrization.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <variant>
#include <vector>

#include "error.hpp"
#include "lattice.hpp"
#include "rational.hpp"

namespace decimate {

enum class BoundaryCondition { Neumann, Dirichlet };

/// Finite Jacobi matrix. sub[i] is entry (i+1, i), super[i] is entry (i, i+1).
struct TridiagonalOperator {
    std::vector<double> diag;
    std::vector<double> sub;
    std::vector<double> super;

    TridiagonalOperator() = default;
    TridiagonalOperator(std::vector<double> d, std::vector<double> lo, std::vector<double> up)
        : diag(std::move(d)), sub(std::move(lo)), super(std::move(up)) {
        require(!diag.empty(), "operator must have at least one row");
        require(sub.size() + 1 == diag.size() && super.size() + 1 == diag.size(),
                "off-diagonal lengths must equal size - 1");
        for (const auto* v : {&diag, &sub, &super})
            for (double x : *v) require(std::isfinite(x), "operator entries must be finite");
    }

    std::size_t size() const { return diag.size(); }

    /// y = T x
    std::vector<double> apply(std::span<const double> x) const {
        require(x.size() == size(), "vector length does not match operator size");
        const std::size_t n = size();
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = diag[i] * x[i];
            if (i > 0) s += sub[i - 1] * x[i - 1];
            if (i + 1 < n) s += super[i] * x[i + 1];
            y[i] = s;
        }
        return y;
    }

    /// Same operator with the index order reversed.
    TridiagonalOperator reversed() const {
        return {{diag.rbegin(), diag.rend()}, {super.rbegin(), super.rend()}, {sub.rbegin(), sub.rend()}};
    }

    bool operator==(const TridiagonalOperator&) const = default;
};

struct SymmetricTridiagonal {
    std::vector<double> diag;
    std::vector<double> off;

    std::size_t size() const { return diag.size(); }

    /// Gershgorin enclosure [lo, hi] of the spectrum.
    std::pair<double, double> gershgorin() const {
        double lo = diag.empty() ? 0.0 : diag[0], hi = lo;
        for (std::size_t i = 0; i < diag.size(); ++i) {
            double r = 0.0;
            if (i > 0) r += std::abs(off[i - 1]);
            if (i < off.size()) r += std::abs(off[i]);
            lo = std::min(lo, diag[i] - r);
            hi = std::max(hi, diag[i] + r);
        }
        return {lo, hi};
    }

    double scale() const {
        auto [lo, hi] = gershgorin();
        return std::max({1.0, std::abs(lo), std::abs(hi)});
    }
};

/// Frequency of the cosine potential: an exact fraction (triadic values
/// reduce the phase exactly) or a plain real number.
using Frequency = std::variant<Rational, double>;

namespace detail {

inline void check_level(int level, BoundaryCondition bc) {
    require(level >= 0, "level must be nonnegative");
    require(level <= 18, "level too large");
    require(bc == BoundaryCondition::Neumann || level >= 1,
            "Dirichlet restriction needs level >= 1 (empty interior at level 0)");
}

inline double potential(const Frequency& alpha, double theta, std::uint64_t x) {
    if (const auto* r = std::get_if<Rational>(&alpha)) {
        const auto den = static_cast<std::uint64_t>(r->den());
        const auto num = static_cast<std::uint64_t>(((r->num() % r->den()) + r->den()) % r->den());
        std::uint64_t m = (num % den) * (x % den) % den;
        if (theta == 0.0) m = std::min(m, den - m);  // cos is even; keeps mirror pairs bit-identical
        return std::cos(2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(den) + theta);
    }
    return std::cos(2.0 * std::numbers::pi * std::get<double>(alpha) * static_cast<double>(x) + theta);
}

} // namespace detail

/// Removes the first and last index.
inline TridiagonalOperator dirichlet_interior(const TridiagonalOperator& t) {
    require(t.size() >= 4, "Dirichlet interior needs an operator of size >= 4");
    return {{t.diag.begin() + 1, t.diag.end() - 1},
            {t.sub.begin() + 1, t.sub.end() - 1},
            {t.super.begin() + 1, t.super.end() - 1}};
}

/// Delta_p^(l): unit diagonal, hops from the lattice classes, reflecting
/// rows f(0)-f(1) and f(3^l)-f(3^l-1).
inline TridiagonalOperator build_laplacian(double p, int level, BoundaryCondition bc) {
    check_probability(p);
    detail::check_level(level, bc);
    const auto last = static_cast<std::uint64_t>(pow3(level));
    const std::size_t n = last + 1;
    std::vector<double> diag(n, 1.0), sub(n - 1), super(n - 1);
    for (std::uint64_t x = 0; x < last; ++x) {
        super[x] = -transition_probabilities(x, p).right;
        sub[x] = x + 1 == last ? -1.0 : -transition_probabilities(x + 1, p).left;
    }
    TridiagonalOperator t(std::move(diag), std::move(sub), std::move(super));
    return bc == BoundaryCondition::Neumann ? t : dirichlet_interior(t);
}

/// H^(l)_{p,beta,alpha,theta}: the Laplacian's off-diagonals with diagonal
/// beta cos(2 pi alpha x + theta) at every vertex 0..3^l.
inline TridiagonalOperator build_amo(double p, double beta, const Frequency& alpha, double theta, int level,
                                     BoundaryCondition bc) {
    require(std::isfinite(beta) && std::isfinite(theta), "beta and theta must be finite");
    if (const auto* a = std::get_if<double>(&alpha)) require(std::isfinite(*a), "alpha must be finite");
    TridiagonalOperator t = build_laplacian(p, level, BoundaryCondition::Neumann);
    for (std::size_t x = 0; x < t.size(); ++x) t.diag[x] = beta * detail::potential(alpha, theta, x);
    return bc == BoundaryCondition::Neumann ? t : dirichlet_interior(t);
}

inline TridiagonalOperator build_amo(double p, double beta, double alpha, double theta, int level,
                                     BoundaryCondition bc) {
    return build_amo(p, beta, Frequency{alpha}, theta, level, bc);
}

/// Similarity by the diagonal pi^(1/2): off[i] = -sqrt(sub[i] super[i]).
inline SymmetricTridiagonal symmetrize(const TridiagonalOperator& t) {
    SymmetricTridiagonal s{t.diag, std::vector<double>(t.sub.size())};
    for (std::size_t i = 0; i < t.sub.size(); ++i) {
        const double prod = t.sub[i] * t.super[i];
        require(prod > 0.0, "symmetrization needs sub[i]*super[i] > 0");
        s.off[i] = -std::sqrt(prod);
    }
    return s;
}

/// Defect of the discrete Green identity
///   sum_{x<=n} f (Tg) pi - sum_{x<=n} (Tf) g pi = -W_n(f,g),
/// W_n(f,g) = pi(n) p(n,n+1) (f(n) g(n+1) - f(n+1) g(n)), for an operator
/// indexed from the origin and pi the reversible measure of the p-lattice.
/// The telescoping sum of rows 0..n yields -W_n with this orientation of W.
inline double greens_identity_defect(const TridiagonalOperator& t, std::span<const double> f,
                                     std::span<const double> g, std::size_t n, double p) {
    require(f.size() == t.size() && g.size() == t.size(), "f and g must match the operator size");
    require(n + 1 < t.size(), "Wronskian index out of range");
    const auto pi = reversible_measure(p, t.size() - 1);
    const auto tf = t.apply(f);
    const auto tg = t.apply(g);
    double lhs = 0.0;
    for (std::size_t x = 0; x <= n; ++x) lhs += (f[x] * tg[x] - tf[x] * g[x]) * pi[x];
    const double wronskian = pi[n] * (-t.super[n]) * (f[n] * g[n + 1] - f[n + 1] * g[n]);
    return std::abs(lhs + wronskian);
}

} // namespace decimate
