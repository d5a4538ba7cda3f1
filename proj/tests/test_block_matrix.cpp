#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

#include "blocktri/block_matrix.hpp"
#include "blocktri/dense_linalg.hpp"
#include "blocktri/instance_gen.hpp"
#include "support/oracles.hpp"
#include "support/test_util.hpp"

namespace {

using namespace blocktri;

TEST(BlockMatrix, StructuralValidation) {
    auto block = [](std::size_t k) { return ComplexMatrix(k, k); };
    std::vector<ComplexMatrix> d2{block(2), block(2)};
    std::vector<ComplexMatrix> one{block(2)};

    EXPECT_NO_THROW(BlockTridiagonalMatrix::from_blocks(2, 2, d2, one, one));
    // Wrong diagonal count.
    EXPECT_THROW(BlockTridiagonalMatrix::from_blocks(2, 3, d2, one, one), std::invalid_argument);
    // Wrong off-diagonal count.
    EXPECT_THROW(BlockTridiagonalMatrix::from_blocks(2, 2, d2, {}, one), std::invalid_argument);
    // Mis-sized block.
    std::vector<ComplexMatrix> bad{block(2), block(3)};
    EXPECT_THROW(BlockTridiagonalMatrix::from_blocks(2, 2, bad, one, one), std::invalid_argument);
    // Degenerate dimensions.
    EXPECT_THROW(BlockTridiagonalMatrix::from_blocks(0, 2, {}, {}, {}), std::invalid_argument);
    EXPECT_THROW(BlockTridiagonalMatrix::from_blocks(2, 0, {}, {}, {}), std::invalid_argument);
}

TEST(BlockMatrix, AssemblePlacesBlocksOnTheBand) {
    std::mt19937_64 rng(11);
    BlockTridiagonalMatrix a = gen_random(2, 3, 17);
    ComplexMatrix dense = assemble_dense(a);
    ASSERT_EQ(dense.rows(), 6u);

    for (std::size_t bi = 0; bi < 3; ++bi)
        for (std::size_t bj = 0; bj < 3; ++bj)
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t j = 0; j < 2; ++j) {
                    cplx want(0.0, 0.0);
                    if (bi == bj) want = a.diag[bi](i, j);
                    else if (bi == bj + 1) want = a.sub[bj](i, j);
                    else if (bj == bi + 1) want = a.super[bi](i, j);
                    EXPECT_EQ(dense(bi * 2 + i, bj * 2 + j), want);
                }
}

TEST(BlockMatrix, MatvecMatchesDense) {
    std::mt19937_64 rng(12);
    const std::vector<std::pair<std::size_t, std::size_t>> shapes{{1, 4}, {3, 5}, {4, 2}};
    for (auto [k, l] : shapes) {
        BlockTridiagonalMatrix a = gen_random(k, l, 23 + k + l);
        std::vector<cplx> x = testutil::random_vector(k * l, rng);
        std::vector<cplx> got = matvec(a, x);
        std::vector<cplx> want = oracle::matvec(assemble_dense(a), x);
        EXPECT_LT(testutil::max_abs_diff(got, want), 1e-12 * (1.0 + vector_norm(want)));
    }
}

TEST(BlockMatrix, TransposeBlocksMatchesDenseTranspose) {
    BlockTridiagonalMatrix a = gen_random(3, 4, 31);
    ComplexMatrix t1 = assemble_dense(transpose_blocks(a));
    ComplexMatrix t2 = assemble_dense(a).transpose();
    EXPECT_EQ(testutil::max_abs_diff(t1, t2), 0.0);
}

TEST(BlockMatrix, ValidateFlagsSingularSuper) {
    BlockTridiagonalMatrix a = gen_random(2, 3, 41);
    EXPECT_TRUE(validate(a).ok);

    a.super[1] = ComplexMatrix(2, 2);  // exactly singular
    ValidationReport r = validate(a);
    EXPECT_FALSE(r.ok);
    ASSERT_EQ(r.super_checks.size(), 2u);
    EXPECT_TRUE(r.super_checks[0].ok);
    EXPECT_FALSE(r.super_checks[1].ok);

    a.super[1] = ComplexMatrix::identity(2);
    a.diag[0](0, 0) = cplx(std::nan(""), 0.0);
    EXPECT_FALSE(validate(a).entries_finite);
}

TEST(BlockMatrix, NormAndRadius) {
    for (std::uint64_t seed : {51u, 52u, 53u, 54u, 55u}) {
        BlockTridiagonalMatrix a = gen_random(2, 4, seed);
        EXPECT_NEAR(frobenius_norm(a), assemble_dense(a).frobenius_norm(), 1e-12);

        // Row sums of block infinity norms, plus the unit margin: the
        // guaranteed ceiling the estimate must never exceed.
        double rmax = 0.0;
        for (std::size_t n = 0; n < a.l; ++n) {
            double row = a.diag[n].inf_norm();
            if (n > 0) row += a.sub[n - 1].inf_norm();
            if (n + 1 < a.l) row += a.super[n].inf_norm();
            rmax = std::max(rmax, row);
        }
        double radius = sample_radius(a);
        EXPECT_LE(radius, 1.0 + rmax + 1e-12);

        // The radius encloses every eigenvalue but stays close to the
        // largest one; a loose radius costs R^degree in the accuracy of the
        // interpolated determinant coefficients.
        double rho = 0.0;
        for (cplx ev : dense_eigenvalues(assemble_dense(a))) rho = std::max(rho, std::abs(ev));
        EXPECT_GT(radius, rho);
        EXPECT_LT(radius, 1.6 * rho + 0.1 * (1.0 + rmax));
    }
}

}  // namespace
