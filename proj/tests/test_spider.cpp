#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "blocktri/block_matrix.hpp"
#include "blocktri/matrix_io.hpp"
#include "blocktri/matrix_polynomial.hpp"
#include "blocktri/spider.hpp"
#include "support/oracles.hpp"
#include "support/test_util.hpp"

namespace {

using namespace blocktri;

TEST(SpiderGraphTest, AdjacencyShape) {
    BlockTridiagonalMatrix a = spider_adjacency({4, 3});
    EXPECT_EQ(a.k, 4u);
    EXPECT_EQ(a.l, 3u);

    ComplexMatrix dense = assemble_dense(a);
    // Symmetric 0/1 matrix.
    for (std::size_t i = 0; i < 12; ++i)
        for (std::size_t j = 0; j < 12; ++j) {
            EXPECT_EQ(dense(i, j), dense(j, i));
            double v = dense(i, j).real();
            EXPECT_TRUE(v == 0.0 || v == 1.0);
            EXPECT_EQ(dense(i, j).imag(), 0.0);
        }

    // Hub connects to the K-1 leg heads and to its depth-1 continuation.
    double hub_degree = 0;
    for (std::size_t j = 0; j < 12; ++j) hub_degree += dense(0, j).real();
    EXPECT_EQ(hub_degree, 4.0);

    // A leg tip (depth L-1) has exactly one neighbor.
    double tip_degree = 0;
    for (std::size_t j = 0; j < 12; ++j) tip_degree += dense(9, j).real();
    EXPECT_EQ(tip_degree, 1.0);

    EXPECT_THROW(spider_adjacency({1, 3}), std::invalid_argument);
    EXPECT_THROW(spider_adjacency({3, 0}), std::invalid_argument);
}

TEST(SpiderGraphTest, ChebyshevAgainstTrigForm) {
    for (long n : {0L, 1L, 2L, 5L, 16L}) {
        for (double theta : {0.3, 1.1, 2.5}) {
            double want = std::sin((n + 1) * theta) / std::sin(theta);
            EXPECT_NEAR(chebyshev_u(n, std::cos(theta)), want, 1e-12 * (1.0 + std::abs(want)));
        }
    }
    EXPECT_EQ(chebyshev_u(-1L, 0.7), 0.0);

    cplx z(0.4, 0.2);
    // U_2(z) = 4z^2 - 1.
    EXPECT_LT(std::abs(chebyshev_u(2L, z) - (4.0 * z * z - 1.0)), 1e-13);
}

TEST(SpiderGraphTest, ClosedFormMatchesRecurrence) {
    std::mt19937_64 rng(51);
    for (std::size_t legs : {2u, 3u, 5u, 8u}) {
        SpiderGraph g{legs, 6};
        EXPECT_EQ(closed_form_sign(g), -1);

        PolynomialSequence seq = generate_sequence(spider_adjacency(g));
        for (int trial = 0; trial < 3; ++trial) {
            cplx x = testutil::random_vector(1, rng)[0];
            for (std::size_t n = 0; n <= 6; ++n) {
                ComplexMatrix closed = spider_closed_form(g, n, x);
                ComplexMatrix rec = evaluate(seq.polys[n], x);
                EXPECT_LT(testutil::max_abs_diff(closed, rec),
                          1e-10 * (1.0 + rec.max_abs()))
                    << "legs " << legs << " n " << n;
            }
        }
    }
}

TEST(SpiderSpectrumTest, FamilySizesAndMultiplicities) {
    SpiderSpectrum s = spider_spectrum({5, 7});
    EXPECT_EQ(s.families.alpha.size(), 7u);
    EXPECT_EQ(s.families.beta.size(), 7u);
    EXPECT_EQ(s.families.gamma.size(), 7u);
    EXPECT_TRUE(std::is_sorted(s.families.alpha.begin(), s.families.alpha.end()));
    EXPECT_EQ(s.spectrum.total(), 35u);

    // Alpha roots carry multiplicity legs - 2, beta/gamma are simple.
    std::size_t triple = 0, simple = 0;
    for (const auto& e : s.spectrum.entries) {
        if (e.multiplicity == 3) ++triple;
        else if (e.multiplicity == 1) ++simple;
        else FAIL() << "unexpected multiplicity " << e.multiplicity;
    }
    EXPECT_EQ(triple, 7u);
    EXPECT_EQ(simple, 14u);
}

TEST(SpiderSpectrumTest, MatchesDenseOracle) {
    SpiderGraph g{5, 6};
    SpiderSpectrum s = spider_spectrum(g);
    std::vector<double> want = oracle::symmetric_eigenvalues(assemble_dense(spider_adjacency(g)));

    std::vector<double> got;
    for (const auto& e : s.spectrum.entries)
        for (std::size_t i = 0; i < e.multiplicity; ++i) got.push_back(e.lambda.real());
    std::sort(got.begin(), got.end());
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-8);
}

TEST(SpiderSpectrumTest, TwoLegsIsThePathGraph) {
    SpiderGraph g{2, 5};
    SpiderSpectrum s = spider_spectrum(g);
    EXPECT_TRUE(s.families.alpha.empty());
    const std::size_t n = 10;
    std::vector<double> got;
    for (const auto& e : s.spectrum.entries) {
        EXPECT_EQ(e.multiplicity, 1u);
        got.push_back(e.lambda.real());
    }
    std::sort(got.begin(), got.end());
    ASSERT_EQ(got.size(), n);
    for (std::size_t m = 0; m < n; ++m) {
        double want = 2.0 * std::cos(double(n - m) * std::numbers::pi / double(n + 1));
        EXPECT_NEAR(got[m], want, 1e-9);
    }
}

class SpiderPlanTest : public ::testing::TestWithParam<std::pair<std::size_t, std::size_t>> {};

TEST_P(SpiderPlanTest, ColumnsAreUnitEigenvectors) {
    auto [legs, depth] = GetParam();
    SpiderGraph g{legs, depth};
    SpiderPlan plan = build_spider_plan(g);
    ComplexMatrix v = materialize_plan_matrix(plan);
    std::vector<double> values = plan_column_values(plan);
    BlockTridiagonalMatrix a = spider_adjacency(g);

    const std::size_t n = legs * depth;
    ASSERT_EQ(v.rows(), n);
    ASSERT_EQ(v.cols(), n);
    ASSERT_EQ(values.size(), n);

    for (std::size_t j = 0; j < n; ++j) {
        std::vector<cplx> col = v.column(j);
        EXPECT_NEAR(vector_norm(col), 1.0, 1e-10);
        std::vector<cplx> r = vector_add_scaled(matvec(a, col), cplx(-values[j], 0.0), col);
        EXPECT_LT(vector_norm(r), 1e-9) << "column " << j;
    }
}

TEST_P(SpiderPlanTest, FastMatchesDirectAndMaterialized) {
    auto [legs, depth] = GetParam();
    SpiderPlan plan = build_spider_plan({legs, depth});
    const std::size_t n = legs * depth;

    std::mt19937_64 rng(60 + legs + depth);
    std::vector<double> y = testutil::random_real_vector(n, rng);

    ExpansionResult fast = fast_expansion(plan, y);
    ExpansionResult direct = direct_expansion(plan, y);
    ASSERT_EQ(fast.coefficients.size(), n);
    ASSERT_EQ(direct.coefficients.size(), n);

    double scale = 0.0;
    for (double c : direct.coefficients) scale = std::max(scale, std::abs(c));
    for (std::size_t i = 0; i < n; ++i)
        EXPECT_NEAR(fast.coefficients[i], direct.coefficients[i], 1e-9 * (1.0 + scale));

    // Cross-check against V^T y with the dense oracle.
    ComplexMatrix v = materialize_plan_matrix(plan);
    std::vector<cplx> yz(n);
    for (std::size_t i = 0; i < n; ++i) yz[i] = y[i];
    std::vector<cplx> want = oracle::matvec(v.transpose(), yz);
    for (std::size_t i = 0; i < n; ++i)
        EXPECT_NEAR(fast.coefficients[i], want[i].real(), 1e-9 * (1.0 + scale));
}

INSTANTIATE_TEST_SUITE_P(Shapes, SpiderPlanTest,
                         ::testing::Values(std::pair<std::size_t, std::size_t>{2, 4},
                                           std::pair<std::size_t, std::size_t>{3, 15},
                                           std::pair<std::size_t, std::size_t>{5, 8},
                                           std::pair<std::size_t, std::size_t>{8, 16}));

TEST(SpiderExpansion, ComplexVectorsExpandComponentwise) {
    SpiderPlan plan = build_spider_plan({4, 7});
    const std::size_t n = 28;
    std::mt19937_64 rng(61);
    std::vector<cplx> y = testutil::random_vector(n, rng);

    std::vector<cplx> got = expand_complex(plan, y, false);

    std::vector<double> re(n), im(n);
    for (std::size_t i = 0; i < n; ++i) {
        re[i] = y[i].real();
        im[i] = y[i].imag();
    }
    ExpansionResult fr = fast_expansion(plan, re);
    ExpansionResult fi = fast_expansion(plan, im);
    for (std::size_t i = 0; i < n; ++i) {
        EXPECT_NEAR(got[i].real(), fr.coefficients[i], 1e-12);
        EXPECT_NEAR(got[i].imag(), fi.coefficients[i], 1e-12);
    }
}

TEST(SpiderExpansion, FastChargesFarFewerOpsThanDirect) {
    SpiderPlan plan = build_spider_plan({8, 63});
    const std::size_t n = 8 * 63;
    std::mt19937_64 rng(62);
    std::vector<double> y = testutil::random_real_vector(n, rng);

    ExpansionResult fast = fast_expansion(plan, y);
    ExpansionResult direct = direct_expansion(plan, y);
    std::uint64_t fast_total = fast.alpha_ops + fast.other_ops;
    std::uint64_t direct_total = direct.alpha_ops + direct.other_ops;
    EXPECT_GT(fast_total, 0u);
    EXPECT_EQ(direct_total, static_cast<std::uint64_t>(n) * n);
    EXPECT_LT(fast_total * 5, direct_total);
}

TEST(SpiderPlanIo, JsonRoundTripPreservesExpansions) {
    SpiderPlan plan = build_spider_plan({5, 15});
    SpiderPlan back = spider_plan_from_json(spider_plan_to_json(plan));

    EXPECT_EQ(back.graph.legs, plan.graph.legs);
    EXPECT_EQ(back.graph.depth, plan.graph.depth);
    EXPECT_EQ(back.sign, plan.sign);

    const std::size_t n = 75;
    std::mt19937_64 rng(63);
    std::vector<double> y = testutil::random_real_vector(n, rng);
    ExpansionResult a = fast_expansion(plan, y);
    ExpansionResult b = fast_expansion(back, y);
    for (std::size_t i = 0; i < n; ++i)
        EXPECT_DOUBLE_EQ(a.coefficients[i], b.coefficients[i]);
}

TEST(SpiderPlanIo, VersionIsChecked) {
    nlohmann::json j = spider_plan_to_json(build_spider_plan({3, 4}));
    j["version"] = "spider-plan/0";
    EXPECT_THROW(spider_plan_from_json(j), FormatError);
    nlohmann::json missing = j;
    missing.erase("version");
    EXPECT_THROW(spider_plan_from_json(missing), FormatError);
}

}  // namespace
