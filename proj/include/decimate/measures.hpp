#pragma once

// Density of states, integrated density of states, balanced measures on the
// Julia set, pushforward along inverse branches, gaps and gap labels.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "decimation.hpp"
#include "eigensolver.hpp"
#include "rational.hpp"
#include "spectra.hpp"

namespace decimate {

/// Finite sum of point masses; atoms closer than 1e-12 are merged.
class AtomicMeasure {
public:
    AtomicMeasure() = default;
    AtomicMeasure(std::vector<double> points, std::vector<double> weights) {
        require(points.size() == weights.size(), "points and weights must have equal length");
        std::vector<std::size_t> order(points.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
        for (std::size_t idx : order) {
            require(weights[idx] >= 0.0, "atom weights must be nonnegative");
            if (!points_.empty() && points[idx] - points_.back() <= 1e-12)
                weights_.back() += weights[idx];
            else {
                points_.push_back(points[idx]);
                weights_.push_back(weights[idx]);
            }
        }
        cumulative_.resize(weights_.size());
        std::partial_sum(weights_.begin(), weights_.end(), cumulative_.begin());
    }

    const std::vector<double>& points() const { return points_; }
    const std::vector<double>& weights() const { return weights_; }
    std::size_t size() const { return points_.size(); }
    double total_mass() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }

    /// nu((-inf, x])
    double cdf(double x) const {
        const auto it = std::upper_bound(points_.begin(), points_.end(), x);
        if (it == points_.begin()) return 0.0;
        return cumulative_[static_cast<std::size_t>(it - points_.begin()) - 1];
    }

    /// nu([lo, hi])
    double mass(double lo, double hi) const {
        double m = 0.0;
        for (std::size_t i = 0; i < points_.size(); ++i)
            if (points_[i] >= lo && points_[i] <= hi) m += weights_[i];
        return m;
    }

private:
    std::vector<double> points_;
    std::vector<double> weights_;
    std::vector<double> cumulative_;
};

struct Gap {
    double lo;
    double hi;
    double label;
};

/// Uniform weight per eigenvalue counted with multiplicity.
inline AtomicMeasure density_of_states(const SpectrumSet& spec) {
    require(!spec.empty(), "density of states needs a nonempty spectrum");
    const double total = spec.total_multiplicity();
    std::vector<double> w(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) w[i] = spec.multiplicities[i] / total;
    return {spec.values, std::move(w)};
}

/// Right-continuous IDS N(x) = nu((-inf, x]).
inline double ids(const AtomicMeasure& mu, double x) { return std::min(1.0, mu.cdf(x)); }

/// IDS of the finite operator straight from a Sturm count.
inline double ids_fast(const SymmetricTridiagonal& s, double x) {
    return static_cast<double>(count_below(s, x + 1e-13 * s.scale())) / static_cast<double>(s.size());
}

/// Brolin approximation: the 3^depth backward images of 2, equal weights.
inline AtomicMeasure balanced_measure(double p, int depth) {
    require(depth >= 1 && depth <= 10, "balanced-measure depth must lie in [1, 10]");
    auto julia = julia_points(p, depth, JuliaMode::FullTree);
    const double w = 1.0 / static_cast<double>(julia.points.size());
    std::vector<double> weights(julia.points.size(), w);
    return {std::move(julia.points), std::move(weights)};
}

/// Pushforward of `base` along the 3^n inverse branches, each with weight 1/3^n.
inline AtomicMeasure amo_density_of_states(const DecimationData& d, const AtomicMeasure& base) {
    for (double x : base.points()) require(x >= -1e-9 && x <= 2.0 + 1e-9, "base measure must be supported in [0, 2]");
    const std::size_t nb = d.degree();
    std::vector<double> pts(base.size() * nb), wts(base.size() * nb);
    parallel_for(base.size(), [&](std::size_t i) {
        const auto br = d.inverse_branches(base.points()[i]);
        for (std::size_t j = 0; j < nb; ++j) {
            pts[i * nb + j] = br[j];
            wts[i * nb + j] = base.weights()[i] / static_cast<double>(nb);
        }
    });
    return {std::move(pts), std::move(wts)};
}

/// Gaps between consecutive spectrum points wider than min_width. With a
/// confirmation operator, an interval survives only if the eigenvalues of that
/// operator inside it leave a free stretch of at least half its width; the
/// label is then the confirmation IDS at the middle of that stretch.
inline std::vector<Gap> detect_gaps(const SpectrumSet& spec, double min_width,
                                    const std::optional<SymmetricTridiagonal>& confirm = std::nullopt) {
    require(min_width > 0.0, "min_width must be positive");
    std::vector<Gap> gaps;
    if (spec.size() < 2) return gaps;
    const auto dos = density_of_states(spec);
    for (std::size_t i = 0; i + 1 < spec.size(); ++i) {
        const double lo = spec.values[i], hi = spec.values[i + 1];
        if (hi - lo <= min_width) continue;
        if (!confirm) {
            gaps.push_back({lo, hi, ids(dos, 0.5 * (lo + hi))});
            continue;
        }
        const double edge = std::min(1e-9, 1e-3 * (hi - lo));
        const std::size_t first = count_below(*confirm, lo + edge), last = count_below(*confirm, hi - edge);
        std::vector<double> cuts{lo};
        for (std::size_t k = first; k < last; ++k) cuts.push_back(kth_eigenvalue(*confirm, k, default_tolerance(*confirm)));
        cuts.push_back(hi);
        double best = 0.0, mid = 0.0;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
            if (cuts[k + 1] - cuts[k] > best) {
                best = cuts[k + 1] - cuts[k];
                mid = 0.5 * (cuts[k] + cuts[k + 1]);
            }
        if (best >= 0.5 * (hi - lo)) gaps.push_back({lo, hi, ids_fast(*confirm, mid)});
    }
    return gaps;
}

/// { j/3^n + j'/3^(n+i) : 0 <= j < 3^n, 0 <= i <= i_max, 0 <= j' <= 3^i }.
inline std::set<Rational> gap_labels_grid(int n, int i_max) {
    require(n >= 1 && i_max >= 0 && n + i_max <= 30, "gap-label grid needs n >= 1, i_max >= 0, n + i_max <= 30");
    std::set<Rational> out;
    const std::int64_t base = pow3(n);
    for (std::int64_t j = 0; j < base; ++j)
        for (int i = 0; i <= i_max; ++i) {
            const std::int64_t fine = pow3(i);
            for (std::int64_t jj = 0; jj <= fine; ++jj) out.insert(Rational(j * fine + jj, base * fine));
        }
    return out;
}

/// Distance from x to the nearest element of a label grid, and that element.
inline std::pair<double, Rational> nearest_label(const std::set<Rational>& grid, double x) {
    require(!grid.empty(), "empty label grid");
    double best = std::numeric_limits<double>::infinity();
    Rational arg;
    for (const auto& r : grid) {
        const double d = std::abs(r.value() - x);
        if (d < best) {
            best = d;
            arg = r;
        }
    }
    return {best, arg};
}

} // namespace decimate
