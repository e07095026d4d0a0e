#pragma once

// Arithmetic of the triadic hierarchical half-line: 3-adic valuation,
// vertex classes and the hop probabilities of the p-Laplacian.

#include <cstdint>
#include <vector>

#include "error.hpp"

namespace decimate {

enum class VertexClass { Origin, ClassOne, ClassTwo };

struct HopPair {
    double left = 0.0;   // p(x, x-1); unused at the origin
    double right = 0.0;  // p(x, x+1)
};

inline void check_probability(double p) {
    require(p > 0.0 && p < 1.0, "p must lie in the open interval (0,1)");
}

/// Largest m with 3^m | x.
inline int triadic_valuation(std::uint64_t x) {
    require(x >= 1, "triadic valuation is undefined at the origin");
    int m = 0;
    while (x % 3 == 0) {
        x /= 3;
        ++m;
    }
    return m;
}

inline VertexClass vertex_class(std::uint64_t x) {
    if (x == 0) return VertexClass::Origin;
    while (x % 3 == 0) x /= 3;
    return x % 3 == 1 ? VertexClass::ClassOne : VertexClass::ClassTwo;
}

inline HopPair transition_probabilities(std::uint64_t x, double p) {
    check_probability(p);
    switch (vertex_class(x)) {
    case VertexClass::Origin:
        return {0.0, 1.0};
    case VertexClass::ClassOne:
        return {1.0 - p, p};
    case VertexClass::ClassTwo:
        return {p, 1.0 - p};
    }
    return {};
}

/// Reversible measure on {0..n} with pi(0) = 1, built by the birth-death
/// recursion pi(x+1) = pi(x) p(x,x+1) / p(x+1,x).
inline std::vector<double> reversible_measure(double p, std::size_t n) {
    check_probability(p);
    require(n >= 1, "reversible measure needs n >= 1");
    std::vector<double> pi(n + 1);
    pi[0] = 1.0;
    for (std::size_t x = 0; x < n; ++x)
        pi[x + 1] = pi[x] * transition_probabilities(x, p).right / transition_probabilities(x + 1, p).left;
    return pi;
}

} // namespace decimate
