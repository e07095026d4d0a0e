#pragma once

// End-to-end acceptance checks. Shared by the `verify` subcommand and the
// acceptance test binary; every tolerance is fixed here.

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "butterfly.hpp"
#include "decimation.hpp"
#include "measures.hpp"
#include "spectra.hpp"

namespace decimate::acceptance {

struct Result {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

namespace detail {

using clock = std::chrono::steady_clock;

inline double since(clock::time_point t0) { return std::chrono::duration<double>(clock::now() - t0).count(); }

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline std::string sci(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

/// Sup of |F - G| over `points` grid points spanning both supports.
inline double ids_sup_difference(const AtomicMeasure& f, const AtomicMeasure& g, int points = 200) {
    const double lo = std::min(f.points().front(), g.points().front()) - 0.1;
    const double hi = std::max(f.points().back(), g.points().back()) + 0.1;
    double worst = 0.0;
    for (int i = 0; i < points; ++i) {
        const double x = lo + (hi - lo) * i / (points - 1);
        worst = std::max(worst, std::abs(ids(f, x) - ids(g, x)));
    }
    return worst;
}

struct Params {
    double p;
    double beta;
    std::int64_t k;
    int n;
};

inline std::vector<Params> oracle_matrix() {
    std::vector<Params> out;
    for (double p : {0.3, 0.5, 0.7})
        for (double beta : {0.0, 1.0, 2.0})
            for (auto [k, n] : {std::pair<std::int64_t, int>{1, 1}, {2, 1}, {1, 2}, {4, 2}}) out.push_back({p, beta, k, n});
    return out;
}

} // namespace detail

inline std::vector<double> level_one_reference() {
    const double a = std::sqrt(217.0), b = std::sqrt(145.0);
    return {(1.0 - a) / 12.0, (5.0 - b) / 12.0, (1.0 + a) / 12.0, (5.0 + b) / 12.0};
}

inline std::vector<double> level_two_reference() {
    return {-1.14424, -1.11189, -0.92631, -0.58679, -0.47717, -0.21899, 1.31091, 1.33089, 1.40349, 1.42013};
}

inline Result level_one_spectrum() {
    Result r{1, "Level-1 AMO spectrum at (p,beta,alpha,theta) = (1/3,1,1/3,0): closed form, tol 1e-10, < 0.1 s", false, {}, 0.0};
    const auto t0 = detail::clock::now();
    const auto dec = amo_spectrum(1.0 / 3.0, 1.0, 1, 1, 1, Method::Decimation);
    const auto dir = amo_spectrum(1.0 / 3.0, 1.0, 1, 1, 1, Method::Direct);
    r.seconds = detail::since(t0);
    const double e1 = detail::max_abs_diff(dec.values, level_one_reference());
    const double e2 = detail::max_abs_diff(dir.values, level_one_reference());
    r.pass = e1 <= 1e-10 && e2 <= 1e-10 && r.seconds < 0.1;
    r.detail = "decimation err " + detail::sci(e1) + ", direct err " + detail::sci(e2);
    return r;
}

inline Result level_two_spectrum() {
    Result r{2, "Level-2 AMO spectrum at (1/3,1,1/3,0): published 5-decimal values, tol 5e-6, < 0.1 s", false, {}, 0.0};
    const auto t0 = detail::clock::now();
    const auto dec = amo_spectrum(1.0 / 3.0, 1.0, 1, 1, 2, Method::Decimation);
    const auto dir = amo_spectrum(1.0 / 3.0, 1.0, 1, 1, 2, Method::Direct);
    r.seconds = detail::since(t0);
    const double e1 = detail::max_abs_diff(dec.values, level_two_reference());
    const double e2 = detail::max_abs_diff(dir.values, level_two_reference());
    const double agree = detail::max_abs_diff(dec.values, dir.values);
    r.pass = e1 <= 5e-6 && e2 <= 5e-6 && r.seconds < 0.1;
    r.detail = "max deviation from printed values " + detail::sci(std::max(e1, e2)) +
               " (printed to 5 decimals), decimation vs direct " + detail::sci(agree);
    return r;
}

inline Result decimation_polynomial() {
    Result r{3, "R = 9/2 z^3 - 55/8 z - 9/8, exceptional {-5/6,-1/6}: closed form and Schur interpolation", false, {}, 0.0};
    const auto t0 = detail::clock::now();
    const std::vector<double> want{-9.0 / 8.0, -55.0 / 8.0, 0.0, 4.5};
    const std::vector<double> exc{-5.0 / 6.0, -1.0 / 6.0};
    const auto closed = amo_decimation_closed_n1(1.0 / 3.0, 1.0, 1);
    const auto interp = amo_decimation(1.0 / 3.0, 1.0, 1, 1);
    r.seconds = detail::since(t0);
    const double c1 = detail::max_abs_diff(closed.R().coeffs(), want);
    const double c2 = detail::max_abs_diff(interp.R().coeffs(), want);
    const double x1 = detail::max_abs_diff(closed.exceptional().values, exc);
    const double x2 = detail::max_abs_diff(interp.exceptional().values, exc);
    r.pass = c1 <= 1e-10 && c2 <= 1e-10 && x1 <= 1e-12 && x2 <= 1e-12;
    r.detail = "coeff err " + detail::sci(std::max(c1, c2)) + ", exceptional err " + detail::sci(std::max(x1, x2));
    return r;
}

inline Result laplacian_closed_loop() {
    Result r{4, "Laplacian decimation: sigma(Delta^(1)_{1/3}) to 1e-12; R fixed points for 20 random p", false, {}, 0.0};
    const auto t0 = detail::clock::now();
    const std::vector<double> want{0.0, 1.0 / 3.0, 5.0 / 3.0, 2.0};
    const double e1 = detail::max_abs_diff(laplacian_spectrum(1.0 / 3.0, 1, Method::Decimation).values, want);
    const double e2 = detail::max_abs_diff(laplacian_spectrum(1.0 / 3.0, 1, Method::Direct).values, want);
    std::mt19937_64 rng(20211);
    std::uniform_real_distribution<double> unif(0.01, 0.99);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double p = unif(rng);
        const auto d = laplacian_decimation(p);
        const auto& poly = d.R();
        for (auto [x, y] : {std::pair{p, 2.0}, {2.0 - p, 0.0}, {0.0, 0.0}, {2.0, 2.0}}) {
            const double bound = 1e-12 * poly.l1_norm() * std::pow(std::max(1.0, std::abs(x)), poly.degree());
            worst = std::max(worst, std::abs(poly(x) - y) / bound);
        }
    }
    r.seconds = detail::since(t0);
    r.pass = e1 <= 1e-12 && e2 <= 1e-12 && worst <= 1.0;
    r.detail = "spectrum err " + detail::sci(std::max(e1, e2)) + ", fixed-point residual / rounding bound " +
               detail::sci(worst);
    return r;
}

inline Result oracle_equivalence() {
    Result r{5, "Decimation == direct: Hausdorff <= 1e-8 over p x beta x (k,n) x l<=5, < 60 s", false, {}, 0.0};
    const auto t0 = detail::clock::now();
    double worst = 0.0;
    int cases = 0;
    for (double p : {0.3, 0.5, 0.7})
        for (int l = 0; l <= 5; ++l) {
            worst = std::max(worst, hausdorff(laplacian_spectrum(p, l, Method::Decimation),
                                              laplacian_spectrum(p, l, Method::Direct)));
            ++cases;
        }
    for (const auto& m : detail::oracle_matrix())
        for (int l = m.n; l <= 5; ++l) {
            worst = std::max(worst, hausdorff(amo_spectrum(m.p, m.beta, m.k, m.n, l, Method::Decimation),
                                              amo_spectrum(m.p, m.beta, m.k, m.n, l, Method::Direct)));
            ++cases;
        }
    r.seconds = detail::since(t0);
    r.pass = worst <= 1e-8 && r.seconds < 60.0;
    r.detail = std::to_string(cases) + " cases, max Hausdorff " + detail::sci(worst);
    return r;
}

inline Result half_laplacian_cosine() {
    Result r{6, "p = 1/2: sigma(Delta^(l)) = {1 - cos(k pi / 3^l)}, l <= 6, tol 1e-10", false, {}, 0.0};
    const auto t0 = detail::clock::now();
    double worst = 0.0;
    for (int l = 0; l <= 6; ++l) {
        const auto n3 = pow3(l);
        std::vector<double> want;
        for (std::int64_t k = 0; k <= n3; ++k) want.push_back(1.0 - std::cos(std::numbers::pi * k / n3));
        std::sort(want.begin(), want.end());
        for (auto m : {Method::Decimation, Method::Direct})
            worst = std::max(worst, detail::max_abs_diff(laplacian_spectrum(0.5, l, m).values, want));
    }
    r.seconds = detail::since(t0);
    r.pass = worst <= 1e-10;
    r.detail = "max err " + detail::sci(worst);
    return r;
}

inline Result cardinality_interlacing() {
    Result r{7, "|sigma(H^(l))| = 3^l + 1 over the oracle matrix; interlacing at (1/3,1,1,1)", false, {}, 0.0};
    const auto t0 = detail::clock::now();
    int bad = 0, cases = 0;
    for (const auto& m : detail::oracle_matrix())
        for (int l = m.n; l <= 5; ++l)
            for (auto method : {Method::Decimation, Method::Direct}) {
                ++cases;
                if (amo_spectrum(m.p, m.beta, m.k, m.n, l, method).size() != static_cast<std::size_t>(pow3(l) + 1)) ++bad;
            }
    const auto s = amo_spectrum(1.0 / 3.0, 1.0, 1, 1, 1, Method::Decimation).values;
    const bool interlace = s.size() == 4 && s[0] <= -5.0 / 6.0 && -5.0 / 6.0 <= s[1] && s[1] <= -1.0 / 6.0 &&
                           -1.0 / 6.0 <= s[2] && s[2] <= s[3];
    r.seconds = detail::since(t0);
    r.pass = bad == 0 && interlace;
    r.detail = std::to_string(cases - bad) + "/" + std::to_string(cases) + " cardinalities ok, interlacing " +
               (interlace ? "ok" : "violated");
    return r;
}

inline Result gap_labeling() {
    Result r{8, "Gap labels at (1/3,1,1,1), l = 6 within 1e-2 of the grid (i_max 4); gap1 endpoints to 1e-8", false, {}, 0.0};
    const auto t0 = detail::clock::now();
    const double p = 1.0 / 3.0;
    const int l = 6;
    const auto spec = amo_spectrum(p, 1.0, 1, 1, l, Method::Direct);
    const auto finer = symmetrize(build_amo(p, 1.0, Rational(1, 3), 0.0, l + 1, BoundaryCondition::Neumann));
    const auto gaps = detect_gaps(spec, 1e-2, finer);
    const auto grid = gap_labels_grid(1, 4);
    double worst = 0.0;
    for (const auto& g : gaps) worst = std::max(worst, nearest_label(grid, g.label).first);

    // first-generation gaps: cutoffs of R at 0 and 2
    const auto d = amo_decimation(p, 1.0, 1, 1);
    auto cut = d.inverse_branches(0.0);
    const auto two = d.inverse_branches(2.0);
    cut.insert(cut.end(), two.begin(), two.end());
    const auto level = symmetrize(build_amo(p, 1.0, Rational(1, 3), 0.0, l, BoundaryCondition::Neumann));
    const auto first = detect_gaps(SpectrumSet(cut, 1e-12), 1e-2, level);
    double gap1_err = std::numeric_limits<double>::infinity();
    if (!first.empty())
        gap1_err = std::max(std::abs(first[0].lo + 5.0 / 6.0), std::abs(first[0].hi - (5.0 - std::sqrt(145.0)) / 12.0));
    r.seconds = detail::since(t0);
    r.pass = !gaps.empty() && worst <= 1e-2 && gap1_err <= 1e-8;
    r.detail = std::to_string(gaps.size()) + " gaps, max label distance " + detail::sci(worst) + ", gap1 err " +
               detail::sci(gap1_err);
    return r;
}

inline Result measure_identities() {
    Result r{9, "Pushforward mass 1e-12; branch scaling exact; finite-level count within +-2 at l = 6", false, {}, 0.0};
    const auto t0 = detail::clock::now();
    const double p = 1.0 / 3.0;
    const auto d = amo_decimation(p, 1.0, 1, 1);
    const auto base = balanced_measure(p, 6);
    const auto nu = amo_density_of_states(d, base);
    const double mass_err = std::abs(nu.total_mass() - 1.0);

    // atomic scaling on E = [0, 1/2]: mass of S_1(E) is base(E)/3
    const auto s0 = d.inverse_branches(0.0)[0], s1 = d.inverse_branches(0.5)[0];
    const double scale_err =
        std::abs(nu.mass(std::min(s0, s1) - 1e-12, std::max(s0, s1) + 1e-12) - base.mass(0.0, 0.5) / 3.0);

    // finite level: eigenvalues of H^(6) in S_1([0,1/3]) vs eigenvalues of Delta^(5) in [0,1/3]
    const int l = 6;
    const auto h = symmetrize(build_amo(p, 1.0, Rational(1, 3), 0.0, l, BoundaryCondition::Neumann));
    const auto lap = symmetrize(build_laplacian(p, l - 1, BoundaryCondition::Neumann));
    const double a = d.inverse_branches(0.0)[0], b = d.inverse_branches(1.0 / 3.0)[0];
    const double eps = 1e-9;
    const auto count_h = static_cast<long>(count_below(h, std::max(a, b) + eps)) -
                         static_cast<long>(count_below(h, std::min(a, b) - eps));
    const auto count_l = static_cast<long>(count_below(lap, 1.0 / 3.0 + eps)) -
                         static_cast<long>(count_below(lap, -eps));
    r.seconds = detail::since(t0);
    r.pass = mass_err <= 1e-12 && scale_err <= 1e-12 && std::abs(count_h - count_l) <= 2;
    r.detail = "mass err " + detail::sci(mass_err) + ", scaling err " + detail::sci(scale_err) + ", counts " +
               std::to_string(count_h) + " vs " + std::to_string(count_l);
    return r;
}

inline Result weak_convergence() {
    Result r{10, "IDS sup-difference <= 0.05: balanced measure vs DOS (p = 1/3, 1/2); AMO pushforward vs H^(7)", false, {}, 0.0};
    const auto t0 = detail::clock::now();
    double worst = 0.0;
    for (double p : {1.0 / 3.0, 0.5})
        worst = std::max(worst, detail::ids_sup_difference(balanced_measure(p, 6),
                                                           density_of_states(laplacian_spectrum(p, 6, Method::Direct))));
    const auto d = amo_decimation(1.0 / 3.0, 1.0, 1, 1);
    const auto nu = amo_density_of_states(d, balanced_measure(1.0 / 3.0, 6));
    const auto dos7 = density_of_states(amo_spectrum(1.0 / 3.0, 1.0, 1, 1, 7, Method::Direct));
    worst = std::max(worst, detail::ids_sup_difference(nu, dos7));
    r.seconds = detail::since(t0);
    r.pass = worst <= 0.05;
    r.detail = "max sup-difference " + detail::sci(worst);
    return r;
}

inline Result butterfly_consistency() {
    Result r{11, "Butterfly: triadic records == decimation to 1e-8; 200-alpha sweep at l = 5 in < 120 s", false, {}, 0.0};
    const auto t0 = detail::clock::now();
    const double p = 1.0 / 3.0, beta = 1.0;
    const int l = 5;
    const auto alphas = triadic_alphas(2);
    const auto recs = sweep_alpha(p, beta, 0.0, l, std::vector<Frequency>(alphas.begin(), alphas.end()));
    double worst = 0.0;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        const auto& a = alphas[i];
        const int n = std::max(1, triadic_exponent(a.den()));
        const std::int64_t k = a.num() * (pow3(n) / a.den());
        worst = std::max(worst, hausdorff(recs[i].eigenvalues, amo_spectrum(p, beta, k, n, l, Method::Decimation)));
    }
    const auto t1 = detail::clock::now();
    const auto full = sweep_alpha(p, beta, 0.0, l, uniform_alphas(200));
    const double sweep_seconds = detail::since(t1);
    std::size_t rows = 0;
    bool finite = true;
    for (const auto& rec : full) {
        rows += static_cast<std::size_t>(rec.eigenvalues.total_multiplicity());
        for (double v : rec.eigenvalues.values) finite = finite && std::isfinite(v);
    }
    r.seconds = detail::since(t0);
    r.pass = worst <= 1e-8 && sweep_seconds < 120.0 && rows == 200u * (static_cast<std::size_t>(pow3(l)) + 1) && finite;
    r.detail = "triadic Hausdorff " + detail::sci(worst) + ", " + std::to_string(rows) + " rows in " +
               detail::sci(sweep_seconds) + " s";
    return r;
}

inline std::vector<std::function<Result()>> all_checks() {
    return {level_one_spectrum, level_two_spectrum,   decimation_polynomial, laplacian_closed_loop,
            oracle_equivalence,  half_laplacian_cosine, cardinality_interlacing, gap_labeling,
            measure_identities,  weak_convergence,      butterfly_consistency};
}

/// Runs every check; a check that throws is reported as failed.
inline std::vector<Result> run_all() {
    std::vector<Result> out;
    int id = 0;
    for (const auto& check : all_checks()) {
        ++id;
        try {
            out.push_back(check());
        } catch (const std::exception& e) {
            out.push_back({id, "criterion " + std::to_string(id), false, std::string("exception: ") + e.what(), 0.0});
        }
    }
    return out;
}

} // namespace decimate::acceptance
