#include <random>

#include <gtest/gtest.h>

#include <cechent/smith.hpp>

#include "oracles.hpp"

using namespace cechent;

namespace {

void expect_valid_smith(const IntMatrix& a, const SmithForm& s) {
    ASSERT_EQ(s.U * a * s.V, s.D);
    EXPECT_EQ(abs(determinant(s.U)), 1);
    EXPECT_EQ(abs(determinant(s.V)), 1);
    EXPECT_EQ(s.U * s.U_inv, IntMatrix::identity(a.rows()));
    EXPECT_EQ(s.V * s.V_inv, IntMatrix::identity(a.cols()));
    for (std::size_t i = 0; i < s.D.rows(); ++i)
        for (std::size_t j = 0; j < s.D.cols(); ++j)
            if (i != j) EXPECT_EQ(s.D(i, j), 0);
    for (std::size_t i = 0; i < s.rank; ++i) EXPECT_GT(s.D(i, i), 0);
    for (std::size_t i = s.rank; i < std::min(a.rows(), a.cols()); ++i) EXPECT_EQ(s.D(i, i), 0);
    for (std::size_t i = 1; i < s.rank; ++i) EXPECT_EQ(s.D(i, i) % s.D(i - 1, i - 1), 0);
}

} // namespace

TEST(SmithNormalForm, ZeroMatrixKeepsIdentityFactors) {
    IntMatrix z(3, 2);
    auto s = smith_normal_form(z);
    EXPECT_EQ(s.rank, 0u);
    EXPECT_EQ(s.U, IntMatrix::identity(3));
    EXPECT_EQ(s.V, IntMatrix::identity(2));
    EXPECT_TRUE(s.D.is_zero());
}

TEST(SmithNormalForm, TwoByTwoMatchesInvariantFactorOracle) {
    IntMatrix a{{2, 4}, {6, 8}};
    // d1 = gcd(2,4,6,8) = 2, d2 = |det| / d1 = 8 / 2 = 4
    auto s = smith_normal_form(a);
    expect_valid_smith(a, s);
    EXPECT_EQ(s.D, (IntMatrix{{2, 0}, {0, 4}}));
    EXPECT_EQ(s.invariant_factors(), oracle::invariant_factors(a));
}

TEST(SmithNormalForm, IdentityIsFixed) {
    auto s = smith_normal_form(IntMatrix::identity(3));
    EXPECT_EQ(s.D, IntMatrix::identity(3));
}

TEST(SmithNormalForm, EmptyShapes) {
    auto s = smith_normal_form(IntMatrix(0, 4));
    EXPECT_EQ(s.rank, 0u);
    EXPECT_EQ(s.V.rows(), 4u);
    EXPECT_EQ(s.kernel_basis().cols(), 4u);
    auto t = smith_normal_form(IntMatrix(3, 0));
    EXPECT_EQ(t.U.rows(), 3u);
}

TEST(SmithNormalForm, RandomMatricesSatisfyContract) {
    std::mt19937 rng(20240611);
    std::uniform_int_distribution<std::size_t> dim(1, 6);
    for (int trial = 0; trial < 150; ++trial) {
        IntMatrix a = oracle::random_matrix(rng, dim(rng), dim(rng), -9, 9);
        auto s = smith_normal_form(a);
        expect_valid_smith(a, s);
        EXPECT_EQ(s.invariant_factors(), oracle::invariant_factors(a)) << a;
    }
}

TEST(SmithNormalForm, LowRankRandomMatrices) {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        IntMatrix l = oracle::random_matrix(rng, 5, 2, -3, 3);
        IntMatrix r = oracle::random_matrix(rng, 2, 4, -3, 3);
        IntMatrix a = l * r;
        auto s = smith_normal_form(a);
        expect_valid_smith(a, s);
        EXPECT_LE(s.rank, 2u);
        EXPECT_EQ(s.invariant_factors(), oracle::invariant_factors(a));
    }
}

TEST(SmithNormalForm, DeterministicFactors) {
    IntMatrix a{{3, 5, 7}, {2, 4, 6}, {1, 1, 0}};
    auto s1 = smith_normal_form(a);
    auto s2 = smith_normal_form(a);
    EXPECT_EQ(s1.U, s2.U);
    EXPECT_EQ(s1.V, s2.V);
}

TEST(SolveInteger, FindsSolutionWhenOneExists) {
    IntMatrix a{{2, 0}, {0, 3}};
    IntMatrix b{{4}, {9}};
    auto x = solve_integer(a, b);
    ASSERT_TRUE(x);
    EXPECT_EQ(a * *x, b);
}

TEST(SolveInteger, RejectsRationalOnlySolutions) {
    IntMatrix a{{2, 0}, {0, 3}};
    IntMatrix b{{1}, {3}};
    EXPECT_FALSE(solve_integer(a, b));
}

TEST(Determinant, BareissAgreesWithCofactorExpansion) {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t n = 1 + trial % 6;
        IntMatrix a = oracle::random_matrix(rng, n, n, -9, 9);
        EXPECT_EQ(determinant(a), oracle::cofactor_det(a));
    }
}
