#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <cechent/polynomial.hpp>

#include "oracles.hpp"

using namespace cechent;

namespace {

// p(A) by Horner's rule on integer matrices.
IntMatrix evaluate_at(const Polynomial& p, const IntMatrix& a) {
    const std::size_t n = a.rows();
    IntMatrix acc(n, n);
    for (int i = p.degree(); i >= 0; --i) {
        acc = acc * a;
        for (std::size_t d = 0; d < n; ++d) acc(d, d) += p.coeff(static_cast<std::size_t>(i));
    }
    return acc;
}

Polynomial from_roots(const std::vector<int>& roots) {
    Polynomial p({1});
    for (int r : roots) p = p * Polynomial::linear_root(r);
    return p;
}

} // namespace

TEST(CharPoly, MatchesFaddeevLeverrierOnRandomMatrices) {
    std::mt19937 rng(23);
    for (int t = 0; t < 120; ++t) {
        const std::size_t n = 1 + t % 6;
        IntMatrix a = oracle::random_matrix(rng, n, n, -9, 9);
        Polynomial p = characteristic_polynomial(a);
        EXPECT_EQ(p.coefficients(), oracle::faddeev_leverrier(a)) << "trial " << t;
        EXPECT_TRUE(p.is_monic());
        EXPECT_TRUE(evaluate_at(p, a).is_zero());
    }
}

TEST(CharPoly, EmptyMatrixIsOne) {
    EXPECT_EQ(characteristic_polynomial(IntMatrix(0, 0)), Polynomial({1}));
}

TEST(CharPoly, Rendering) {
    EXPECT_EQ(characteristic_polynomial(IntMatrix{{2}}).to_string(), "x - 2");
    EXPECT_EQ(from_roots({1, 2}).to_string(), "x^2 - 3x + 2");
}

TEST(Polynomial, DivisionAndGcd) {
    Polynomial a = from_roots({1, 2, 2}), b = from_roots({2, 5});
    Polynomial g = polynomial_gcd(a, b);
    EXPECT_EQ(g.degree(), 1);
    EXPECT_EQ(g.evaluate(2), 0);
    auto qr = a.divmod(from_roots({2}));
    ASSERT_TRUE(qr.has_value());
    EXPECT_TRUE(qr->second.is_zero());
    EXPECT_EQ(qr->first, from_roots({1, 2}));
}

TEST(Roots, IntegerAndComplexRoots) {
    Polynomial p = from_roots({2, -3}) * Polynomial({1, 0, 1});
    RootReport r = polynomial_roots(p);
    std::vector<Integer> ints = r.integer_roots;
    std::sort(ints.begin(), ints.end());
    EXPECT_EQ(ints, (std::vector<Integer>{-3, 2}));
    ASSERT_EQ(r.roots.size(), 4u);
    int unit = 0;
    for (const auto& z : r.roots)
        if (std::abs(std::abs(z) - 1.0) < 1e-9) ++unit;
    EXPECT_EQ(unit, 2);
    EXPECT_LE(r.error_bound, 1e-9);
}

TEST(Roots, ModuliMatchEigenOracleOnRandomMatrices) {
    std::mt19937 rng(29);
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = 1 + t % 5;
        IntMatrix a = oracle::random_matrix(rng, n, n, -4, 4);
        SpectralSummary s = spectral_summary(a);
        // every reported root annihilates the characteristic polynomial
        for (const auto& z : s.eigenvalues) {
            const auto v = s.char_poly.evaluate_as<std::complex<long double>>(std::complex<long double>(z.real(), z.imag()));
            long double scale = 1;
            for (const auto& c : s.char_poly.coefficients()) scale += std::fabs(static_cast<long double>(c)) * std::pow(std::abs(z) + 1.0, n);
            EXPECT_LT(std::abs(v) / scale, 1e-9);
        }
        // Gershgorin: rho is at most the largest absolute row sum
        double bound = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double row = 0;
            for (std::size_t j = 0; j < n; ++j) row += std::fabs(static_cast<double>(a(i, j)));
            bound = std::max(bound, row);
        }
        EXPECT_LE(s.rho, bound + 1e-9);
    }
}

TEST(Spectral, IdentityOnRankTwo) {
    SpectralSummary s = spectral_summary(IntMatrix::identity(2));
    EXPECT_EQ(s.char_poly, from_roots({1, 1}));
    EXPECT_DOUBLE_EQ(s.rho, 1.0);
    EXPECT_DOUBLE_EQ(s.log_rho, 0.0);
    EXPECT_TRUE(s.rho_exact);
}

TEST(Spectral, MultiplicationByTwo) {
    SpectralSummary s = spectral_summary(IntMatrix{{2}});
    EXPECT_DOUBLE_EQ(s.rho, 2.0);
    EXPECT_NEAR(s.log_rho, std::log(2.0), 1e-12);
}

TEST(Spectral, SupOverBlocks) {
    SpectralSummary s = spectral_summary(std::vector<IntMatrix>{IntMatrix{{1}}, IntMatrix{{2}}});
    EXPECT_DOUBLE_EQ(s.rho, 2.0);
    EXPECT_EQ(s.char_poly, from_roots({1, 2}));
}

TEST(Spectral, NilpotentHasNoLog) {
    SpectralSummary s = spectral_summary(IntMatrix{{0, 1}, {0, 0}});
    EXPECT_DOUBLE_EQ(s.rho, 0.0);
    EXPECT_TRUE(std::isinf(s.log_rho));
}

TEST(Spectral, IrrationalRootIsCertified) {
    // x^2 - x - 1, golden ratio
    SpectralSummary s = spectral_summary(IntMatrix{{1, 1}, {1, 0}});
    EXPECT_NEAR(s.rho, (1.0 + std::sqrt(5.0)) / 2.0, 1e-9);
    EXPECT_TRUE(s.certified);
    EXPECT_FALSE(s.rho_exact);
}
