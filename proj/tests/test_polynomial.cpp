#include <gtest/gtest.h>

#include <complex>
#include <random>

#include <decimate/polynomial.hpp>

using namespace decimate;

TEST(Polynomial, EvaluationAndDerivative) {
    const Polynomial p({1.0, -3.0, 0.0, 2.0});  // 2z^3 - 3z + 1
    EXPECT_DOUBLE_EQ(p(0.0), 1.0);
    EXPECT_DOUBLE_EQ(p(2.0), 11.0);
    EXPECT_DOUBLE_EQ(p(std::complex<double>(0, 1)).imag(), -5.0);
    const auto d = p.derivative();  // 6z^2 - 3
    EXPECT_EQ(d.degree(), 2);
    EXPECT_DOUBLE_EQ(d(1.5), 10.5);
    // central difference
    const double h = 1e-5, z = 0.37;
    EXPECT_NEAR((p(z + h) - p(z - h)) / (2 * h), d(z), 1e-8);
    EXPECT_DOUBLE_EQ(p.l1_norm(), 6.0);
}

TEST(Polynomial, TrimsLeadingZeros) {
    const Polynomial p({1.0, 2.0, 0.0, 0.0});
    EXPECT_EQ(p.degree(), 1);
}

TEST(Polynomial, FromRootsMatchesProduct) {
    const auto p = Polynomial::from_roots({1.0, -2.0, 3.0}, 2.0);
    // 2 (z-1)(z+2)(z-3) = 2z^3 - 4z^2 - 10z + 12
    const std::vector<double> want{12, -10, -4, 2};
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_DOUBLE_EQ(p.coeffs()[i], want[i]);
}

TEST(Polynomial, SimpleRealRoots) {
    const auto r = real_roots(Polynomial::from_roots({-3.0, 1.0, 2.0}));
    ASSERT_EQ(r.size(), 3u);
    EXPECT_NEAR(r[0], -3.0, 1e-13);
    EXPECT_NEAR(r[1], 1.0, 1e-13);
    EXPECT_NEAR(r[2], 2.0, 1e-13);
}

TEST(Polynomial, ComplexRootsAreDropped) {
    EXPECT_TRUE(real_roots(Polynomial({1.0, 0.0, 1.0})).empty());
    const auto r = real_roots(Polynomial({-2.0, 2.0, -1.0, 1.0}));  // (z^2 + 2)(z - 1)... check below
    // z^3 - z^2 + 2z - 2 = (z - 1)(z^2 + 2)
    ASSERT_EQ(r.size(), 1u);
    EXPECT_NEAR(r[0], 1.0, 1e-13);
}

TEST(Polynomial, DoubleRootReportedOnce) {
    const auto r = real_roots(Polynomial::from_roots({1.0, 1.0, -2.0}));
    ASSERT_EQ(r.size(), 2u);
    EXPECT_NEAR(r[0], -2.0, 1e-10);
    EXPECT_NEAR(r[1], 1.0, 1e-6);
}

TEST(Polynomial, WindowFilters) {
    const auto p = Polynomial::from_roots({-3.0, 0.5, 1.0, 4.0});
    const auto r = real_roots(p, Interval{0.0, 2.0});
    ASSERT_EQ(r.size(), 2u);
    EXPECT_NEAR(r[0], 0.5, 1e-13);
    EXPECT_NEAR(r[1], 1.0, 1e-13);
}

TEST(Polynomial, RandomRootsRecovered) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> roots(9);
        for (auto& x : roots) x = u(rng);
        std::sort(roots.begin(), roots.end());
        bool separated = true;
        for (std::size_t i = 1; i < roots.size(); ++i) separated = separated && roots[i] - roots[i - 1] > 1e-3;
        if (!separated) continue;
        const auto r = real_roots(Polynomial::from_roots(roots));
        ASSERT_EQ(r.size(), roots.size());
        for (std::size_t i = 0; i < r.size(); ++i) EXPECT_NEAR(r[i], roots[i], 1e-9);
    }
}

TEST(Polynomial, ConstantRejected) { EXPECT_THROW(real_roots(Polynomial({3.0})), validation_error); }
