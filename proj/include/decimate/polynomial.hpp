#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "error.hpp"

namespace decimate {

/// Real polynomial, coefficients in ascending powers.
class Polynomial {
public:
    Polynomial() : coeffs_{0.0} {}
    explicit Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
        require(!coeffs_.empty(), "polynomial needs at least one coefficient");
        while (coeffs_.size() > 1 && std::abs(coeffs_.back()) <= 1e-300) coeffs_.pop_back();
    }

    static Polynomial from_roots(const std::vector<double>& roots, double lead = 1.0) {
        std::vector<double> c{lead};
        for (double r : roots) {
            std::vector<double> next(c.size() + 1, 0.0);
            for (std::size_t i = 0; i < c.size(); ++i) {
                next[i + 1] += c[i];
                next[i] -= r * c[i];
            }
            c = std::move(next);
        }
        return Polynomial(std::move(c));
    }

    const std::vector<double>& coeffs() const { return coeffs_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    double lead() const { return coeffs_.back(); }

    template <class T>
    T operator()(T z) const {
        T acc = coeffs_.back();
        for (std::size_t i = coeffs_.size() - 1; i-- > 0;) acc = acc * z + coeffs_[i];
        return acc;
    }

    Polynomial derivative() const {
        if (coeffs_.size() == 1) return Polynomial({0.0});
        std::vector<double> d(coeffs_.size() - 1);
        for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<double>(i);
        return Polynomial(std::move(d));
    }

    /// Sum of |c_i|.
    double l1_norm() const {
        double s = 0.0;
        for (double c : coeffs_) s += std::abs(c);
        return s;
    }

    friend Polynomial operator-(const Polynomial& a, double c) {
        auto v = a.coeffs_;
        v[0] -= c;
        return Polynomial(std::move(v));
    }
    friend Polynomial operator*(double s, const Polynomial& a) {
        auto v = a.coeffs_;
        for (double& x : v) x *= s;
        return Polynomial(std::move(v));
    }

private:
    std::vector<double> coeffs_;
};

struct Interval {
    double lo;
    double hi;
};

/// Real roots of P by Weierstrass (Durand-Kerner) simultaneous iteration,
/// started on a circle of radius 1 + max|c_i / c_lead|. Nearly real iterates
/// are polished by bisection when P changes sign around them. Roots closer
/// than 1e-9 are merged.
inline std::vector<double> real_roots(const Polynomial& poly, std::optional<Interval> window = std::nullopt,
                                      double tol = 1e-14) {
    using cplx = std::complex<double>;
    const int deg = poly.degree();
    require(deg >= 1, "root finding needs degree >= 1");
    const auto& c = poly.coeffs();
    const double lead = c.back();

    std::vector<double> monic(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) monic[i] = c[i] / lead;
    const Polynomial q(monic);

    double radius = 0.0;
    for (int i = 0; i < deg; ++i) radius = std::max(radius, std::abs(monic[i]));
    radius += 1.0;

    std::vector<cplx> z(deg);
    for (int k = 0; k < deg; ++k)
        z[k] = std::polar(radius, 2.0 * std::numbers::pi * k / deg + 0.4);

    constexpr int max_iter = 5000;
    bool converged = false;
    int stalled = 0;
    for (int it = 0; it < max_iter && !converged; ++it) {
        double max_step = 0.0;
        for (int k = 0; k < deg; ++k) {
            cplx denom = 1.0;
            for (int j = 0; j < deg; ++j)
                if (j != k) denom *= (z[k] - z[j]);
            if (denom == cplx(0.0)) denom = cplx(1e-300);
            const cplx step = q(z[k]) / denom;
            z[k] -= step;
            max_step = std::max(max_step, std::abs(step) / (1.0 + std::abs(z[k])));
        }
        if (max_step < 1e-15) converged = true;
        // clustered (multiple) roots converge linearly and stall near sqrt(eps)
        if (max_step < 1e-8 && ++stalled > 400) converged = true;
    }
    if (!converged) throw numerical_error("polynomial root iteration did not converge");

    // candidates: nearly real iterates; conjugate pairs of a multiple root collapse
    std::vector<std::pair<double, double>> cand;  // (real part, |imag|)
    for (const auto& r : z) {
        const double im = std::abs(r.imag());
        if (im < 1e-9 || im < 1e-6 * (1.0 + std::abs(r.real()))) cand.emplace_back(r.real(), im);
    }
    std::sort(cand.begin(), cand.end());

    std::vector<double> roots;
    for (std::size_t i = 0; i < cand.size();) {
        std::size_t j = i + 1;
        while (j < cand.size() && cand[j].first - cand[j - 1].first < 1e-6 * (1.0 + std::abs(cand[i].first))) ++j;
        const std::size_t cluster = j - i;
        double x = 0.0, spread = 0.0;
        for (std::size_t k = i; k < j; ++k) {
            x += cand[k].first;
            spread = std::max(spread, cand[k].second);
        }
        x /= static_cast<double>(cluster);
        // a lone iterate with non-negligible imaginary part is a genuinely complex root
        if (cluster == 1 && spread >= 1e-9) {
            i = j;
            continue;
        }
        const double half = std::max({1e-9, 10.0 * spread, 1e-12 * std::abs(x)});
        double lo = x - half, hi = x + half;
        double flo = q(lo), fhi = q(hi);
        if (cluster % 2 == 1 && flo * fhi < 0.0) {
            for (int it = 0; it < 200 && hi - lo > tol * std::max(1.0, std::abs(x)); ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                const double fm = q(mid);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            x = 0.5 * (lo + hi);
        }
        roots.push_back(x);
        i = j;
    }

    std::vector<double> merged;
    for (double r : roots)
        if (merged.empty() || r - merged.back() > 1e-9) merged.push_back(r);
    if (window) {
        std::erase_if(merged, [&](double r) { return r < window->lo || r > window->hi; });
    }
    return merged;
}

} // namespace decimate
