#include <gtest/gtest.h>

#include <decimate/lattice.hpp>

using namespace decimate;

TEST(Lattice, TriadicValuation) {
    EXPECT_EQ(triadic_valuation(1), 0);
    EXPECT_EQ(triadic_valuation(3), 1);
    EXPECT_EQ(triadic_valuation(18), 2);
    EXPECT_EQ(triadic_valuation(81), 4);
    EXPECT_EQ(triadic_valuation(7), 0);
    EXPECT_THROW(triadic_valuation(0), validation_error);
}

TEST(Lattice, VertexClass) {
    EXPECT_EQ(vertex_class(0), VertexClass::Origin);
    // x / 3^m mod 3
    EXPECT_EQ(vertex_class(1), VertexClass::ClassOne);
    EXPECT_EQ(vertex_class(2), VertexClass::ClassTwo);
    EXPECT_EQ(vertex_class(3), VertexClass::ClassOne);
    EXPECT_EQ(vertex_class(4), VertexClass::ClassOne);
    EXPECT_EQ(vertex_class(5), VertexClass::ClassTwo);
    EXPECT_EQ(vertex_class(6), VertexClass::ClassTwo);
    EXPECT_EQ(vertex_class(45), VertexClass::ClassTwo);
    EXPECT_EQ(vertex_class(36), VertexClass::ClassOne);
}

TEST(Lattice, TransitionProbabilities) {
    const double p = 0.3;
    const auto o = transition_probabilities(0, p);
    EXPECT_DOUBLE_EQ(o.right, 1.0);
    const auto one = transition_probabilities(1, p);
    EXPECT_DOUBLE_EQ(one.left, 0.7);
    EXPECT_DOUBLE_EQ(one.right, 0.3);
    const auto two = transition_probabilities(2, p);
    EXPECT_DOUBLE_EQ(two.left, 0.3);
    EXPECT_DOUBLE_EQ(two.right, 0.7);
    for (std::uint64_t x = 1; x < 200; ++x) {
        const auto h = transition_probabilities(x, p);
        EXPECT_DOUBLE_EQ(h.left + h.right, 1.0);
    }
    EXPECT_THROW(transition_probabilities(1, 0.0), validation_error);
    EXPECT_THROW(transition_probabilities(1, 1.0), validation_error);
    EXPECT_THROW(transition_probabilities(1, -0.5), validation_error);
}

TEST(Lattice, ReversibleMeasureHandValues) {
    // p = 1/3: pi(1) = 1/(1-p) = 3/2, pi(2) = pi(1) p / p, pi(3) = pi(2) (1-p)/(1-p)
    const auto pi = reversible_measure(1.0 / 3.0, 4);
    EXPECT_DOUBLE_EQ(pi[0], 1.0);
    EXPECT_NEAR(pi[1], 1.5, 1e-15);
    EXPECT_NEAR(pi[2], 1.5, 1e-15);
    EXPECT_NEAR(pi[3], 1.5, 1e-15);
    // vertex 4 is class one: pi(4) = pi(3) p(3,4) / p(4,3) = 1.5 * (1/3) / (2/3)
    EXPECT_NEAR(pi[4], 0.75, 1e-15);
}

TEST(Lattice, DetailedBalance) {
    for (double p : {0.1, 0.3, 0.5, 0.77}) {
        const auto pi = reversible_measure(p, 243);
        for (std::size_t x = 0; x + 1 < pi.size(); ++x) {
            EXPECT_GT(pi[x], 0.0);
            const double lhs = pi[x] * transition_probabilities(x, p).right;
            const double rhs = pi[x + 1] * transition_probabilities(x + 1, p).left;
            EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(lhs, 1.0));
        }
    }
}
