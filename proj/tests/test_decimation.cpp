#include <gtest/gtest.h>

#include <decimate/decimation.hpp>

#include "oracles.hpp"

using namespace decimate;

namespace {

// R = psi / phi read off the dense Schur complement S = phi Delta0 - psi I.
double dense_ratio(const TridiagonalOperator& cell, double z) {
    const auto s = oracle::schur_dense(cell, z);
    const double phi = -s[1];
    return (phi - s[0]) / phi;
}

} // namespace

TEST(Decimation, LaplacianClosedFormMatchesSchur) {
    for (double p : {0.2, 1.0 / 3.0, 0.5, 0.8}) {
        const auto d = laplacian_decimation(p);
        EXPECT_EQ(d.n(), 1);
        EXPECT_EQ(d.degree(), 3u);
        for (double z : {-0.7, 0.13, 0.9, 1.41, 2.3}) {
            const double want = dense_ratio(d.cell(), z);
            EXPECT_NEAR(d.R()(z), want, 1e-11 * std::max(1.0, std::abs(want)));
            EXPECT_NEAR(d.evaluate(z), want, 1e-11 * std::max(1.0, std::abs(want)));
        }
    }
}

TEST(Decimation, LaplacianFixedPoints) {
    for (double p : {0.1, 0.3, 0.5, 0.9}) {
        const auto d = laplacian_decimation(p);
        EXPECT_NEAR(d.R()(0.0), 0.0, 1e-12);
        EXPECT_NEAR(d.R()(2.0), 2.0, 1e-11 / (p * (1 - p)));
        EXPECT_NEAR(d.R()(p), 2.0, 1e-11 / (p * (1 - p)));
        EXPECT_NEAR(d.R()(2.0 - p), 0.0, 1e-11 / (p * (1 - p)));
        EXPECT_NEAR(d.phi_scale(), p * (1 - p), 1e-15);
    }
}

TEST(Decimation, PaperExampleClosedForm) {
    const auto d = amo_decimation_closed_n1(1.0 / 3.0, 1.0, 1);
    const std::vector<double> want{-9.0 / 8.0, -55.0 / 8.0, 0.0, 4.5};
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(d.R().coeffs()[i], want[i], 1e-12);
    ASSERT_EQ(d.exceptional().size(), 2u);
    EXPECT_NEAR(d.exceptional().values[0], -5.0 / 6.0, 1e-13);
    EXPECT_NEAR(d.exceptional().values[1], -1.0 / 6.0, 1e-13);
}

TEST(Decimation, SchurInterpolationMatchesClosedForm) {
    for (double p : {0.3, 0.5, 0.7})
        for (double beta : {0.0, 1.0, 2.0})
            for (int k : {1, 2}) {
                const auto a = amo_decimation_closed_n1(p, beta, k);
                const auto b = amo_decimation(p, beta, k, 1);
                for (std::size_t i = 0; i < 4; ++i)
                    EXPECT_NEAR(a.R().coeffs()[i], b.R().coeffs()[i], 1e-10) << p << " " << beta << " " << k;
                EXPECT_NEAR(a.phi_scale(), b.phi_scale(), 1e-13);
            }
}

TEST(Decimation, HigherLevelsMatchDenseSchur) {
    struct Case {
        double p, beta;
        std::int64_t k;
        int n;
    };
    for (const auto& c : {Case{0.3, 1.0, 1, 2}, Case{0.7, 2.0, 4, 2}, Case{1.0 / 3.0, 1.0, 5, 3}, Case{0.5, 0.5, 7, 3}}) {
        const auto d = amo_decimation(c.p, c.beta, c.k, c.n);
        EXPECT_EQ(d.n(), c.n);
        EXPECT_EQ(d.degree(), static_cast<std::size_t>(pow3(c.n)));
        for (double z : {-2.7, -0.61, 0.33, 1.9, 2.8}) {
            const double want = dense_ratio(d.cell(), z);
            const double tol = 1e-8 * std::max(1.0, std::abs(want));
            EXPECT_NEAR(d.evaluate(z), want, tol);
            EXPECT_NEAR(d.R()(z), want, tol);
        }
    }
}

TEST(Decimation, LevelFourHeldOut) {
    const auto d = amo_decimation(0.4, 1.0, 13, 4);
    EXPECT_TRUE(d.branches_real());
    // degree-81 Horner is only accurate relative to sum |c_i| |z|^i
    for (double z : {-1.1, 0.2, 1.7}) {
        double scale = 0.0;
        for (std::size_t i = 0; i < d.R().coeffs().size(); ++i)
            scale += std::abs(d.R().coeffs()[i]) * std::pow(std::abs(z), static_cast<double>(i));
        EXPECT_NEAR(d.R()(z), d.evaluate(z), 1e-8 * std::max(1.0, scale));
    }
}

TEST(Decimation, PhiPsiAgainstDenseSchur) {
    const auto d = amo_decimation(0.3, 1.0, 4, 2);
    for (double z : {-1.9, 0.05, 1.23}) {
        const auto s = oracle::schur_dense(d.cell(), z);
        const double phi = -s[1], psi = phi - s[0];
        EXPECT_NEAR(d.phi(z), phi, 1e-10 * std::max(1.0, std::abs(phi)));
        EXPECT_NEAR(d.psi(z), psi, 1e-9 * std::max(1.0, std::abs(psi)));
        EXPECT_NEAR(d.psi(z), d.evaluate(z) * d.phi(z), 1e-12 * std::max(1.0, std::abs(psi)));
    }
}

TEST(Decimation, ExceptionalSetIsDirichletSpectrum) {
    const auto d = amo_decimation(0.3, 1.0, 4, 2);
    const auto dir = oracle::jacobi_eigenvalues(
        oracle::dense(symmetrize(build_amo(0.3, 1.0, Rational(4, 9), 0.0, 2, BoundaryCondition::Dirichlet))));
    ASSERT_EQ(d.exceptional().total_multiplicity(), static_cast<int>(dir.size()));
    std::vector<double> flat;
    for (std::size_t i = 0; i < d.exceptional().size(); ++i)
        flat.insert(flat.end(), d.exceptional().multiplicities[i], d.exceptional().values[i]);
    for (std::size_t i = 0; i < dir.size(); ++i) EXPECT_NEAR(flat[i], dir[i], 1e-11);
}

TEST(Decimation, PhiScaleClosedProduct) {
    // c = -H01 * H[m, m+1] * prod super(X), m = 3^n - 1
    const auto d = amo_decimation(0.3, 1.3, 2, 2);
    const auto& h = d.cell();
    const std::size_t m = h.size() - 2;
    double c = -h.super[0] * h.super[m];
    for (std::size_t i = 1; i < m; ++i) c *= h.super[i];
    EXPECT_NEAR(d.phi_scale(), c, 1e-12 * std::abs(c));
    EXPECT_NEAR(amo_decimation(0.3, 1.0, 1, 1).phi_scale(), 0.3 * 0.7, 1e-14);
}

TEST(Decimation, DerivativeFiniteDifference) {
    const auto d = amo_decimation(0.3, 1.0, 1, 2);
    for (double z : {-1.3, 0.4, 1.2}) {
        const double h = 1e-6;
        const double fd = (d.evaluate(z + h) - d.evaluate(z - h)) / (2 * h);
        EXPECT_NEAR(d.derivative(z), fd, 1e-5 * std::max(1.0, std::abs(fd)));
    }
}

TEST(Decimation, ZeroBetaIsShiftedLaplacianMap) {
    const auto lap = laplacian_decimation(0.3);
    const auto amo = amo_decimation(0.3, 0.0, 1, 1);
    for (double z : {-1.5, -0.2, 0.7, 1.4}) EXPECT_NEAR(amo.evaluate(z), lap.evaluate(z + 1.0), 1e-11);
}

TEST(Decimation, InverseBranches) {
    for (auto [k, n] : {std::pair<std::int64_t, int>{1, 1}, {2, 1}, {1, 2}, {4, 2}}) {
        const auto d = amo_decimation(0.3, 1.0, k, n);
        ASSERT_TRUE(d.branches_real());
        for (double lam : {0.0, 0.3, 1.0, 1.7, 2.0}) {
            const auto br = d.inverse_branches(lam);
            ASSERT_EQ(br.size(), static_cast<std::size_t>(pow3(n)));
            EXPECT_TRUE(std::is_sorted(br.begin(), br.end()));
            for (double x : br) EXPECT_NEAR(d.evaluate(x), lam, 1e-9);
        }
    }
    EXPECT_THROW(laplacian_decimation(0.3).inverse_branches(2.5), validation_error);
}

TEST(Decimation, SchurPoleIsNumericalError) {
    const auto cell = build_amo(1.0 / 3.0, 1.0, Rational(1, 3), 0.0, 1, BoundaryCondition::Neumann);
    EXPECT_THROW(schur_complement(cell, cplx(-5.0 / 6.0, 0.0)), numerical_error);
    EXPECT_NO_THROW(schur_complement(cell, cplx(-5.0 / 6.0, 0.1)));
}

TEST(Decimation, AsymmetricCellRejected) {
    const auto cell = build_amo(0.3, 1.0, 0.2, 0.0, 1, BoundaryCondition::Neumann);
    EXPECT_THROW(extract_phi_psi(schur_complement(cell, cplx(3.0, 0.0))), numerical_error);
}

TEST(Decimation, ArgumentValidation) {
    EXPECT_THROW(amo_decimation(0.3, 1.0, 3, 1), validation_error);
    EXPECT_THROW(amo_decimation(0.3, 1.0, 1, 0), validation_error);
    EXPECT_THROW(amo_decimation(0.3, 1.0, 1, 5), validation_error);
    EXPECT_THROW(amo_decimation(1.0, 1.0, 1, 1), validation_error);
}
