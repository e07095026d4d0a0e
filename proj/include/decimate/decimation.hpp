#pragma once

// Spectral decimation: Schur complements of a level-n cell onto its two
// boundary vertices, the functions phi and psi, the decimation polynomial R
// and the branches of its inverse over [0, 2].

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "eigensolver.hpp"
#include "error.hpp"
#include "operators.hpp"
#include "polynomial.hpp"
#include "rational.hpp"

namespace decimate {

using cplx = std::complex<double>;

/// 2x2 complex matrix, row-major.
struct Matrix2 {
    std::array<cplx, 4> a{};
    cplx& operator()(int i, int j) { return a[2 * i + j]; }
    const cplx& operator()(int i, int j) const { return a[2 * i + j]; }
    double norm() const {
        double m = 0.0;
        for (const auto& x : a) m = std::max(m, std::abs(x));
        return m;
    }
};

namespace detail {

/// Solves a general tridiagonal system by Gaussian elimination with partial
/// pivoting (the dgtsv scheme). lower[i] = A(i+1,i), upper[i] = A(i,i+1).
template <class T>
std::vector<T> solve_tridiagonal(std::vector<T> lower, std::vector<T> diag, std::vector<T> upper, std::vector<T> b) {
    const std::size_t n = diag.size();
    if (n == 0) return b;
    std::vector<T> upper2(n, T(0));
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(diag[i]) >= std::abs(lower[i])) {
            if (diag[i] == T(0)) throw numerical_error("singular tridiagonal system");
            const T fact = lower[i] / diag[i];
            diag[i + 1] -= fact * upper[i];
            b[i + 1] -= fact * b[i];
        } else {
            const T fact = diag[i] / lower[i];
            diag[i] = lower[i];
            const T tmp = diag[i + 1];
            diag[i + 1] = upper[i] - fact * tmp;
            if (i + 2 < n) {
                upper2[i] = upper[i + 1];
                upper[i + 1] = -fact * upper2[i];
            }
            upper[i] = tmp;
            const T tb = b[i];
            b[i] = b[i + 1];
            b[i + 1] = tb - fact * b[i + 1];
        }
    }
    if (diag[n - 1] == T(0)) throw numerical_error("singular tridiagonal system");
    b[n - 1] /= diag[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - upper[n - 2] * b[n - 1]) / diag[n - 2];
    for (std::size_t i = n - 2; i-- > 0;)
        b[i] = (b[i] - upper[i] * b[i + 1] - upper2[i] * b[i + 2]) / diag[i];
    return b;
}

/// det(zI - A) for the leading `rows` rows/columns of a tridiagonal A,
/// together with its derivative in z.
inline std::pair<double, double> leading_charpoly(const TridiagonalOperator& a, std::size_t rows, double z) {
    double prev = 1.0, cur = 1.0, dprev = 0.0, dcur = 0.0;
    for (std::size_t k = 0; k < rows; ++k) {
        const double shift = z - a.diag[k];
        const double b = k > 0 ? a.sub[k - 1] * a.super[k - 1] : 0.0;
        const double next = shift * cur - b * prev;
        const double dnext = cur + shift * dcur - b * dprev;
        prev = cur;
        cur = next;
        dprev = dcur;
        dcur = dnext;
    }
    return {cur, dcur};
}

/// Monic characteristic polynomial det(zI - A) in coefficient form.
inline Polynomial charpoly(const TridiagonalOperator& a) {
    std::vector<double> prev{1.0}, cur{1.0};
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double b = k > 0 ? a.sub[k - 1] * a.super[k - 1] : 0.0;
        std::vector<double> next(cur.size() + 1, 0.0);
        for (std::size_t i = 0; i < cur.size(); ++i) {
            next[i + 1] += cur[i];
            next[i] -= a.diag[k] * cur[i];
        }
        if (k > 0)
            for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= b * prev[i];
        prev = std::move(cur);
        cur = std::move(next);
    }
    return Polynomial(std::move(cur));
}

inline bool is_power_of_three(std::size_t v) {
    while (v > 1 && v % 3 == 0) v /= 3;
    return v == 1;
}

} // namespace detail

/// S(z) = T - z - J^T (X - z)^{-1} J for the split of a Neumann cell into its
/// two end vertices and the interior X. Two tridiagonal solves.
inline Matrix2 schur_complement(const TridiagonalOperator& h, cplx z) {
    require(h.size() >= 4, "Schur complement needs a cell of size >= 4");
    const std::size_t n = h.size(), m = n - 2;
    const TridiagonalOperator x = dirichlet_interior(h);
    if (std::abs(z.imag()) < 1e-10) {
        const auto sx = symmetrize(x);
        if (count_below(sx, z.real() - 1e-10) != count_below(sx, z.real() + 1e-10))
            throw numerical_error("Schur complement evaluated at a pole (z too close to the Dirichlet spectrum)");
    }
    std::vector<cplx> lower(x.sub.begin(), x.sub.end()), upper(x.super.begin(), x.super.end()), diag(m);
    for (std::size_t i = 0; i < m; ++i) diag[i] = x.diag[i] - z;

    std::vector<cplx> rhs0(m, 0.0), rhs1(m, 0.0);
    rhs0[0] = h.sub[0];            // H(1, 0)
    rhs1[m - 1] = h.super[n - 2];  // H(n-2, n-1)
    const auto u = detail::solve_tridiagonal(lower, diag, upper, rhs0);
    const auto v = detail::solve_tridiagonal(lower, diag, upper, rhs1);

    Matrix2 s;
    s(0, 0) = h.diag[0] - z - h.super[0] * u[0];
    s(0, 1) = -h.super[0] * v[0];
    s(1, 0) = -h.sub[n - 2] * u[m - 1];
    s(1, 1) = h.diag[n - 1] - z - h.sub[n - 2] * v[m - 1];
    return s;
}

struct PhiPsi {
    cplx phi;
    cplx psi;
};

/// Reads phi, psi off S = phi * Delta^(0) - psi * I.
inline PhiPsi extract_phi_psi(const Matrix2& s) {
    const double defect = std::max(std::abs(s(0, 0) - s(1, 1)), std::abs(s(0, 1) - s(1, 0)));
    if (defect >= 1e-8 * std::max(s.norm(), 1e-300))
        throw numerical_error("Schur complement is not of the form phi*Delta0 - psi*I "
                              "(cell not mirror symmetric: alpha not triadic or theta != 0)");
    const cplx phi = -s(0, 1);
    return {phi, phi - s(0, 0)};
}

/// Decimation data for a mirror-symmetric cell H^(n) spectrally similar to
/// Delta^(0). Immutable after construction.
class DecimationData {
public:
    /// Builds everything except the monomial form of R.
    DecimationData(TridiagonalOperator cell, Polynomial r, double phi_scale)
        : cell_(std::move(cell)), r_(std::move(r)), phi_scale_(phi_scale) {
        const std::size_t n3 = cell_.size() - 1;
        require(cell_.size() >= 4 && detail::is_power_of_three(n3), "decimation cell must have 3^n + 1 vertices");
        n_ = 0;
        for (std::size_t v = n3; v > 1; v /= 3) ++n_;
        require(phi_scale_ != 0.0, "phi scale must be nonzero");
        const auto interior = dirichlet_interior(cell_);
        const auto si = symmetrize(interior);
        exceptional_ = eigenvalues(si, 1e-15 * si.scale());
        dirichlet_charpoly_ = detail::charpoly(interior);
        build_branches();
    }

    int n() const { return n_; }
    std::size_t degree() const { return cell_.size() - 1; }
    const Polynomial& R() const { return r_; }
    const SpectrumSet& exceptional() const { return exceptional_; }
    double phi_scale() const { return phi_scale_; }
    const Polynomial& dirichlet_charpoly() const { return dirichlet_charpoly_; }
    const TridiagonalOperator& cell() const { return cell_; }

    /// R(z) = 1 + det(z - H^(n) without its last vertex) / c_phi.
    double evaluate(double z) const {
        return 1.0 + detail::leading_charpoly(cell_, cell_.size() - 1, z).first / phi_scale_;
    }
    double derivative(double z) const {
        return detail::leading_charpoly(cell_, cell_.size() - 1, z).second / phi_scale_;
    }
    /// phi(z) = c_phi / det(z - X)
    double phi(double z) const {
        return phi_scale_ / detail::leading_charpoly(dirichlet_interior(cell_), cell_.size() - 2, z).first;
    }
    double psi(double z) const { return evaluate(z) * phi(z); }

    bool branches_real() const { return branches_real_; }
    /// Breakpoints e_0 < c_1 < ... < c_{N-1} < e_N of the monotone pieces.
    const std::vector<double>& breakpoints() const { return breaks_; }

    /// The 3^n solutions of R(z) = lam, ascending (branch i is element i).
    std::vector<double> inverse_branches(double lam) const {
        require(lam >= -1e-12 && lam <= 2.0 + 1e-12, "inverse branches are defined for lam in [0, 2]");
        if (!branches_real_)
            throw numerical_error("branch-realness failure: R has a critical value inside (0, 2), "
                                  "fewer than 3^n real preimages");
        lam = std::clamp(lam, 0.0, 2.0);
        const std::size_t nb = degree();
        std::vector<double> out(nb);
        for (std::size_t i = 0; i < nb; ++i) out[i] = solve_on_piece(breaks_[i], breaks_[i + 1], lam);
        return out;
    }

private:
    double solve_on_piece(double lo, double hi, double lam) const {
        double flo = evaluate(lo) - lam, fhi = evaluate(hi) - lam;
        const double touch = 1e-9 * (1.0 + std::abs(lam));
        if (flo == 0.0) return lo;
        if (fhi == 0.0) return hi;
        if ((flo < 0.0) == (fhi < 0.0)) {
            // the level is touched at a critical point
            if (std::min(std::abs(flo), std::abs(fhi)) <= touch) return std::abs(flo) < std::abs(fhi) ? lo : hi;
            throw numerical_error("branch-realness failure: no preimage on a monotone piece");
        }
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            const double fm = evaluate(mid) - lam;
            if (fm == 0.0) return mid;
            if ((fm < 0.0) == (flo < 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    }

    void build_branches() {
        const std::size_t nb = degree();
        // roots of R = 1 are the eigenvalues of the cell without its last vertex
        TridiagonalOperator head({cell_.diag.begin(), cell_.diag.end() - 1}, {cell_.sub.begin(), cell_.sub.end() - 1},
                                 {cell_.super.begin(), cell_.super.end() - 1});
        const auto hs = symmetrize(head);
        std::vector<double> mid(nb);
        for (std::size_t k = 0; k < nb; ++k) mid[k] = kth_eigenvalue(hs, k, 1e-15 * hs.scale());

        breaks_.assign(nb + 1, 0.0);
        branches_real_ = true;
        for (std::size_t i = 0; i + 1 < nb; ++i) {
            double lo = mid[i], hi = mid[i + 1];
            double dlo = derivative(lo), dhi = derivative(hi);
            if ((dlo < 0.0) == (dhi < 0.0)) {
                branches_real_ = false;
                breaks_[i + 1] = 0.5 * (lo + hi);
                continue;
            }
            for (int it = 0; it < 200; ++it) {
                const double m = 0.5 * (lo + hi);
                if (m <= lo || m >= hi) break;
                const double dm = derivative(m);
                if (dm == 0.0) {
                    lo = hi = m;
                    break;
                }
                if ((dm < 0.0) == (dlo < 0.0))
                    lo = m;
                else
                    hi = m;
            }
            const double c = 0.5 * (lo + hi);
            breaks_[i + 1] = c;
            if (std::abs(evaluate(c) - 1.0) < 1.0 - 1e-9) branches_real_ = false;
        }
        // outer ends: walk out until R leaves [0, 2] on both sides
        double a = mid.front() - 1.0, b = mid.back() + 1.0;
        double step = 1.0;
        for (int it = 0; it < 200 && std::abs(evaluate(a) - 1.0) < 1.5; ++it) a -= (step *= 2.0);
        step = 1.0;
        for (int it = 0; it < 200 && std::abs(evaluate(b) - 1.0) < 1.5; ++it) b += (step *= 2.0);
        breaks_.front() = a;
        breaks_.back() = b;
    }

    TridiagonalOperator cell_;
    Polynomial r_;
    double phi_scale_ = 1.0;
    int n_ = 0;
    SpectrumSet exceptional_;
    Polynomial dirichlet_charpoly_;
    std::vector<double> breaks_;
    bool branches_real_ = false;
};

/// Closed form for Delta_p: R(z) = z(z+p-2)(z-p-1) / (p(1-p)), exceptional {1-p, 1+p}.
inline DecimationData laplacian_decimation(double p) {
    check_probability(p);
    const double q = p * (1.0 - p);
    Polynomial r({0.0, (2.0 + q) / q, -3.0 / q, 1.0 / q});
    return {build_laplacian(p, 1, BoundaryCondition::Neumann), std::move(r), q};
}

/// Closed form at n = 1, k in {1, 2}:
/// R(z) = (-b + 2p - 2z)(b^2 + 2bp + bz - 2pz - 2p - 2z^2 + 2) / (4p(1-p)).
inline DecimationData amo_decimation_closed_n1(double p, double beta, int k) {
    check_probability(p);
    require(k == 1 || k == 2, "closed-form decimation covers k = 1, 2 at n = 1");
    const double d = 4.0 * p * (1.0 - p);
    const double b = beta;
    Polynomial r({(2.0 * p - b) * (b * b + 2.0 * b * p - 2.0 * p + 2.0) / d,
                  (-3.0 * b * b + 4.0 * p - 4.0 - 4.0 * p * p) / d, 0.0, 4.0 / d});
    return {build_amo(p, beta, Rational(k, 3), 0.0, 1, BoundaryCondition::Neumann), std::move(r), p * (1.0 - p)};
}

namespace detail {

/// Monomial coefficients of the interpolant through (x_j, y_j).
inline Polynomial lagrange_to_monomial(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t m = x.size();
    std::vector<double> w(m, 1.0);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k)
            if (k != j) w[j] /= (x[j] - x[k]);
    // full node polynomial, then synthetic division per node
    std::vector<double> full{1.0};
    for (double xk : x) {
        std::vector<double> next(full.size() + 1, 0.0);
        for (std::size_t i = 0; i < full.size(); ++i) {
            next[i + 1] += full[i];
            next[i] -= xk * full[i];
        }
        full = std::move(next);
    }
    std::vector<double> coeffs(m, 0.0), quot(m);
    for (std::size_t j = 0; j < m; ++j) {
        double carry = 0.0;
        for (std::size_t i = m; i-- > 0;) {
            carry = full[i + 1] + carry * x[j];
            quot[i] = carry;
        }
        for (std::size_t i = 0; i < m; ++i) coeffs[i] += y[j] * w[j] * quot[i];
    }
    return Polynomial(std::move(coeffs));
}

inline double nudge_off_poles(double x, const SpectrumSet& poles) {
    for (int pass = 0; pass < 4; ++pass) {
        bool moved = false;
        for (double e : poles.values)
            if (std::abs(x - e) < 1e-4) {
                x += 1e-4;
                moved = true;
            }
        if (!moved) break;
    }
    return x;
}

inline double decimation_ratio(const TridiagonalOperator& cell, double z) {
    const auto pp = extract_phi_psi(schur_complement(cell, cplx(z, 0.0)));
    return (pp.psi / pp.phi).real();
}

} // namespace detail

/// Coefficients of R(z) = 1 + det(z - H^(n)[0..3^n-1]) / c_phi.
inline Polynomial charpoly_form(const TridiagonalOperator& cell, double phi_scale) {
    TridiagonalOperator head({cell.diag.begin(), cell.diag.end() - 1}, {cell.sub.begin(), cell.sub.end() - 1},
                             {cell.super.begin(), cell.super.end() - 1});
    auto c = detail::charpoly(head).coeffs();
    for (double& x : c) x /= phi_scale;
    c[0] += 1.0;
    return Polynomial(std::move(c));
}

/// Decimation data of H^(n)_{p,beta,k/3^n,0} for any level 1 <= n <= 4. R is
/// reconstructed from psi/phi at 3^n + 1 Chebyshev nodes on [-(|b|+2), |b|+2].
inline DecimationData amo_decimation(double p, double beta, std::int64_t k, int n) {
    check_probability(p);
    require(n >= 1 && n <= 4, "decimation level must satisfy 1 <= n <= 4");
    const std::int64_t den = pow3(n);
    require(k >= 0 && k < den, "k must satisfy 0 <= k < 3^n");
    auto cell = build_amo(p, beta, Rational(k, den), 0.0, n, BoundaryCondition::Neumann);

    const double reach = std::abs(beta) + 2.0;
    const auto exceptional = eigenvalues(symmetrize(dirichlet_interior(cell)));

    // c_phi from one Schur evaluation outside every spectrum
    const double z0 = std::abs(beta) + 3.0;
    const auto pp0 = extract_phi_psi(schur_complement(cell, cplx(z0, 0.0)));
    const double chi0 = detail::leading_charpoly(dirichlet_interior(cell), cell.size() - 2, z0).first;
    const double phi_scale = pp0.phi.real() * chi0;

    const std::size_t deg = static_cast<std::size_t>(den);
    std::vector<double> xs(deg + 1), ys(deg + 1);
    for (std::size_t j = 0; j <= deg; ++j) {
        xs[j] = detail::nudge_off_poles(reach * std::cos(std::numbers::pi * static_cast<double>(j) / static_cast<double>(deg)),
                                        exceptional);
        ys[j] = detail::decimation_ratio(cell, xs[j]);
    }
    double norm = 0.0;
    for (double y : ys) norm = std::max(norm, std::abs(y));

    std::vector<double> held_x(10), held_y(10);
    for (int j = 0; j < 10; ++j) {
        held_x[j] = detail::nudge_off_poles(reach * std::cos(std::numbers::pi * (j + 0.37) / 10.0), exceptional);
        held_y[j] = detail::decimation_ratio(cell, held_x[j]);
    }
    const auto held_out_ok = [&](const Polynomial& r) {
        for (int j = 0; j < 10; ++j)
            if (std::abs(r(held_x[j]) - held_y[j]) > 1e-8 * norm) return false;
        return true;
    };

    // interpolate in t = z / reach, then rescale to powers of z
    std::vector<double> ts(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) ts[j] = xs[j] / reach;
    auto tc = detail::lagrange_to_monomial(ts, ys).coeffs();
    double power = 1.0;
    for (double& c : tc) {
        c /= power;
        power *= reach;
    }
    Polynomial r(std::move(tc));
    if (!held_out_ok(r)) {
        // Monomial conversion of a degree >= 27 interpolant loses too many
        // digits; take the coefficients of 1 + det(z - head)/c_phi instead.
        r = charpoly_form(cell, phi_scale);
        if (!held_out_ok(r))
            throw numerical_error("decimation polynomial reconstruction failed: held-out residual too large");
    }
    return {std::move(cell), std::move(r), phi_scale};
}

} // namespace decimate
