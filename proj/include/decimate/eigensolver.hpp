#pragma once

// Sturm-sequence kernels for symmetric tridiagonal matrices.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "error.hpp"
#include "operators.hpp"
#include "parallel.hpp"

namespace decimate {

/// Sorted eigenvalues with multiplicities after merging at dedup_tol.
struct SpectrumSet {
    std::vector<double> values;
    std::vector<int> multiplicities;
    double dedup_tol = 1e-9;

    SpectrumSet() = default;
    explicit SpectrumSet(std::vector<double> raw, double tol = 1e-9) : dedup_tol(tol) {
        std::sort(raw.begin(), raw.end());
        for (std::size_t i = 0; i < raw.size();) {
            std::size_t j = i + 1;
            while (j < raw.size() && raw[j] - raw[j - 1] <= tol) ++j;
            double sum = 0.0;
            for (std::size_t k = i; k < j; ++k) sum += raw[k];
            values.push_back(sum / static_cast<double>(j - i));
            multiplicities.push_back(static_cast<int>(j - i));
            i = j;
        }
    }

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }

    int total_multiplicity() const {
        int s = 0;
        for (int m : multiplicities) s += m;
        return s;
    }

    /// Union of two spectra, re-merged at the larger tolerance. Multiplicities add.
    friend SpectrumSet unite(const SpectrumSet& a, const SpectrumSet& b) {
        std::vector<double> raw;
        for (const auto* s : {&a, &b})
            for (std::size_t i = 0; i < s->size(); ++i) raw.insert(raw.end(), s->multiplicities[i], s->values[i]);
        return SpectrumSet(std::move(raw), std::max(a.dedup_tol, b.dedup_tol));
    }
};

/// Number of eigenvalues strictly below x (Sturm sign count of the LDL^T
/// pivots of S - x). A pivot that is exactly zero is treated as if x had been
/// moved right by 1e-13 * scale.
inline std::size_t count_below(const SymmetricTridiagonal& s, double x) {
    const std::size_t n = s.size();
    if (n == 0) return 0;
    const double nudge = 1e-13 * s.scale();
    std::size_t count = 0;
    double q = s.diag[0] - x;
    if (q == 0.0) q = -nudge;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < n; ++i) {
        q = s.diag[i] - x - s.off[i - 1] * s.off[i - 1] / q;
        if (q == 0.0) q = -nudge;
        if (q < 0.0) ++count;
    }
    return count;
}

inline double default_tolerance(const SymmetricTridiagonal& s) { return 1e-12 * s.scale(); }

/// Eigenvalue with 0-based ascending index k by bisection on count_below.
inline double kth_eigenvalue(const SymmetricTridiagonal& s, std::size_t k, double tol) {
    auto [lo, hi] = s.gershgorin();
    lo -= tol;
    hi += tol;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (count_below(s, mid) > k)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

/// All eigenvalues, each located to absolute accuracy tol. Per-eigenvalue
/// bisections run concurrently; the result does not depend on thread count.
inline SpectrumSet eigenvalues(const SymmetricTridiagonal& s, double tol, bool concurrent = true) {
    require(tol > 0.0, "eigenvalue tolerance must be positive");
    require(s.off.size() + 1 == s.diag.size(), "malformed symmetric tridiagonal");
    std::vector<double> vals(s.size());
    const auto one = [&](std::size_t k) { vals[k] = kth_eigenvalue(s, k, tol); };
    if (concurrent)
        parallel_for(s.size(), one);
    else
        for (std::size_t k = 0; k < s.size(); ++k) one(k);
    return SpectrumSet(std::move(vals), std::min(1e-9, std::max(tol, 1e-15)));
}

inline SpectrumSet eigenvalues(const SymmetricTridiagonal& s) { return eigenvalues(s, default_tolerance(s)); }

inline SpectrumSet eigenvalues(const TridiagonalOperator& t) { return eigenvalues(symmetrize(t)); }

} // namespace decimate
