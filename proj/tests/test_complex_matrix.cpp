#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "blocktri/complex_matrix.hpp"
#include "support/oracles.hpp"
#include "support/test_util.hpp"

namespace {

using blocktri::ComplexMatrix;
using blocktri::cplx;
using blocktri::vector_add_scaled;
using blocktri::vector_norm;

TEST(ComplexMatrix, MultiplyMatchesOracle) {
    std::mt19937_64 rng(1);
    const std::size_t shapes[][3] = {{1, 1, 1}, {2, 3, 4}, {4, 4, 4}, {5, 2, 7}, {8, 8, 8}};
    for (const auto& s : shapes) {
        ComplexMatrix a = testutil::random_matrix(s[0], s[1], rng);
        ComplexMatrix b = testutil::random_matrix(s[1], s[2], rng);
        ComplexMatrix got = a * b;
        ComplexMatrix want = oracle::matmul(a, b);
        EXPECT_LT(testutil::max_abs_diff(got, want), 1e-12 * (1.0 + want.max_abs()));
    }
}

TEST(ComplexMatrix, MultiplySkipsZeroRowsCorrectly) {
    // Sparse-ish a exercises the zero-coefficient skip in the axpy loop.
    std::mt19937_64 rng(2);
    ComplexMatrix a(4, 4);
    a(0, 1) = cplx(2.0, -1.0);
    a(3, 2) = cplx(-0.5, 0.25);
    ComplexMatrix b = testutil::random_matrix(4, 4, rng);
    EXPECT_LT(testutil::max_abs_diff(a * b, oracle::matmul(a, b)), 1e-13);
}

TEST(ComplexMatrix, MatvecMatchesOracle) {
    std::mt19937_64 rng(3);
    ComplexMatrix m = testutil::random_matrix(6, 4, rng);
    std::vector<cplx> x = testutil::random_vector(4, rng);
    EXPECT_LT(testutil::max_abs_diff(m * x, oracle::matvec(m, x)), 1e-13);
}

TEST(ComplexMatrix, TransposesAndNorms) {
    std::mt19937_64 rng(4);
    ComplexMatrix m = testutil::random_matrix(3, 5, rng);

    ComplexMatrix t = m.transpose();
    ComplexMatrix h = m.conjugate_transpose();
    ASSERT_EQ(t.rows(), 5u);
    ASSERT_EQ(t.cols(), 3u);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 5; ++j) {
            EXPECT_EQ(t(j, i), m(i, j));
            EXPECT_EQ(h(j, i), std::conj(m(i, j)));
        }

    double fro = 0.0, maxab = 0.0;
    for (const auto& e : m.data()) {
        fro += std::norm(e);
        maxab = std::max(maxab, std::abs(e));
    }
    EXPECT_NEAR(m.frobenius_norm(), std::sqrt(fro), 1e-12);
    EXPECT_DOUBLE_EQ(m.max_abs(), maxab);

    double inf = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < 5; ++j) row += std::abs(m(i, j));
        inf = std::max(inf, row);
    }
    EXPECT_NEAR(m.inf_norm(), inf, 1e-12);
}

TEST(ComplexMatrix, ArithmeticAndIdentity) {
    std::mt19937_64 rng(5);
    ComplexMatrix a = testutil::random_matrix(3, 3, rng);
    ComplexMatrix b = testutil::random_matrix(3, 3, rng);

    ComplexMatrix s = a + b;
    ComplexMatrix d = a - b;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            EXPECT_LT(std::abs(s(i, j) - (a(i, j) + b(i, j))), 1e-15);
            EXPECT_LT(std::abs(d(i, j) - (a(i, j) - b(i, j))), 1e-15);
        }

    ComplexMatrix eye = ComplexMatrix::identity(3);
    EXPECT_LT(testutil::max_abs_diff(eye * a, a), 1e-15);
    EXPECT_LT(testutil::max_abs_diff(a * eye, a), 1e-15);

    cplx f(0.5, -2.0);
    ComplexMatrix scaled = f * a;
    for (std::size_t i = 0; i < 9; ++i)
        EXPECT_LT(std::abs(scaled.data()[i] - f * a.data()[i]), 1e-15);
}

TEST(ComplexMatrix, ColumnAccess) {
    std::mt19937_64 rng(6);
    ComplexMatrix m = testutil::random_matrix(4, 3, rng);
    std::vector<cplx> c = testutil::random_vector(4, rng);
    m.set_column(1, c);
    EXPECT_EQ(m.column(1), c);
    ComplexMatrix tail = m.columns(1, 2);
    ASSERT_EQ(tail.cols(), 2u);
    EXPECT_EQ(tail.column(0), c);
    EXPECT_EQ(tail.column(1), m.column(2));
}

TEST(ComplexMatrix, VectorHelpers) {
    std::mt19937_64 rng(7);
    std::vector<cplx> x = testutil::random_vector(9, rng);
    std::vector<cplx> y = testutil::random_vector(9, rng);
    double n2 = 0.0;
    for (const auto& e : x) n2 += std::norm(e);
    EXPECT_NEAR(vector_norm(x), std::sqrt(n2), 1e-13);

    cplx a(1.5, -0.5);
    std::vector<cplx> z = vector_add_scaled(x, a, y);
    for (std::size_t i = 0; i < x.size(); ++i)
        EXPECT_LT(std::abs(z[i] - (x[i] + a * y[i])), 1e-14);
}

TEST(ComplexMatrix, FiniteCheck) {
    ComplexMatrix m(2, 2);
    EXPECT_TRUE(m.all_finite());
    m(1, 0) = cplx(std::nan(""), 0.0);
    EXPECT_FALSE(m.all_finite());
    m(1, 0) = cplx(0.0, std::numeric_limits<double>::infinity());
    EXPECT_FALSE(m.all_finite());
}

}  // namespace
