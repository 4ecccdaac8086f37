#include "test_support.hpp"

#include "volsel/charpoly.hpp"
#include "volsel/derand.hpp"
#include "volsel/error.hpp"
#include "volsel/linalg.hpp"
#include "volsel/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace volsel;
using namespace volsel::oracle;
using volsel::testing::random_matrix;
using volsel::testing::relative_error;

TEST(Oracle, BinomialAndSubsetEnumeration) {
    EXPECT_EQ(binomial(7, 3), 35.0);
    EXPECT_EQ(binomial(3, 5), 0.0);
    std::vector<Subset> seen;
    for_each_subset(4, 2, [&](const Subset& s) { seen.push_back(s); });
    const std::vector<Subset> expected{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    EXPECT_EQ(seen, expected);
}

TEST(SubsetDeterminant, SingletonDuplicateAndPair) {
    const auto a = random_matrix(4, 3, 1);
    for (std::size_t i = 0; i < 4; ++i) {
        const Subset s{i};
        EXPECT_NEAR(subset_determinant(a, s), squared_norm(a.row(i)), 1e-12);
    }
    const Subset dup{2, 2};
    EXPECT_NEAR(subset_determinant(a, dup), 0.0, 1e-12);

    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) {
            const double ni = squared_norm(a.row(i)), nj = squared_norm(a.row(j)), ij = dot(a.row(i), a.row(j));
            const Subset s{i, j};
            EXPECT_LE(relative_error(subset_determinant(a, s), ni * nj - ij * ij), 1e-12);
        }
}

TEST(BruteForceDistribution, Examples) {
    const auto uniform = brute_force_distribution(RealMatrix::identity(3), 2);
    ASSERT_EQ(uniform.subsets.size(), 3u);
    for (double p : uniform.probabilities) EXPECT_NEAR(p, 1.0 / 3.0, 1e-15);

    const auto dup = brute_force_distribution(RealMatrix::from_rows({{1, 0}, {1, 0}, {0, 1}}), 2);
    EXPECT_EQ(dup.probability({0, 1}), 0.0);
    EXPECT_NEAR(dup.probability({0, 2}), 0.5, 1e-15);
    EXPECT_NEAR(dup.probability({1, 2}), 0.5, 1e-15);

    const std::vector<double> d{2, 3};
    const auto sq = brute_force_distribution(RealMatrix::diagonal(d), 1);
    EXPECT_NEAR(sq.probabilities[0], 4.0 / 13.0, 1e-15);
    EXPECT_NEAR(sq.probabilities[1], 9.0 / 13.0, 1e-15);
}

TEST(BruteForceDistribution, GuardRejectsHugeEnumerations) {
    const auto a = random_matrix(60, 8, 3);
    try {
        brute_force_distribution(a, 8);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TooLarge);
    }
}

TEST(ExactMarginal, EmptyPrefixIsSquaredLength) {
    const auto a = random_matrix(5, 3, 9);
    const auto p = exact_marginals(a, 1, {});
    const double total = a.frobenius_norm_sq();
    for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(p[i], squared_norm(a.row(i)) / total, 1e-14);
}

TEST(ExactMarginal, InfeasiblePrefix) {
    const auto a = RealMatrix::from_rows({{1, 0, 0}, {2, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    try {
        exact_marginals(a, 3, {0, 1});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InfeasiblePrefix);
    }
}

TEST(ExactMarginal, ConsistentWithDistribution) {
    const auto a = random_matrix(6, 4, 21);
    const std::size_t k = 3;
    const auto dist = brute_force_distribution(a, k);
    // P(X_1 = i) = sum_{S ni i} P(S) / k, and the two-step version.
    const auto first = exact_marginals(a, k, {});
    for (std::size_t i = 0; i < 6; ++i) {
        double expected = 0.0;
        for (std::size_t s = 0; s < dist.subsets.size(); ++s)
            if (std::ranges::find(dist.subsets[s], i) != dist.subsets[s].end()) expected += dist.probabilities[s] / k;
        EXPECT_NEAR(first[i], expected, 1e-12);
    }
    for (std::size_t i = 0; i < 6; ++i) {
        const auto second = exact_marginals(a, k, {i});
        double sum = 0.0;
        for (double p : second) sum += p;
        EXPECT_NEAR(sum, 1.0, 1e-12);
        EXPECT_EQ(second[i], 0.0);
    }
}

TEST(ExpectedResidual, FullRankSubsetHasZeroResidual) {
    const auto a = random_matrix(5, 3, 4);
    EXPECT_NEAR(expected_residual(a, 3), 0.0, 1e-10);
}

TEST(ExpectedResidual, BoundAndClosedForm) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto a = random_matrix(6, 4, 500 + seed);
        const auto s = thin_svd(a).singular_values;
        const double value = expected_residual(a, 2);
        EXPECT_LE(value, 3.0 * (s[2] * s[2] + s[3] * s[3]));
        EXPECT_LE(relative_error(value, expected_residual_closed_form(a, 2)), 1e-8);
    }
}

TEST(VerifyDetDivision, Cases) {
    const auto a = random_matrix(6, 5, 8);
    const auto empty_s = verify_det_division(a, {}, {1, 3});
    EXPECT_TRUE(empty_s.pass);
    EXPECT_NEAR(empty_s.lhs, subset_determinant(a, Subset{1, 3}), 1e-12);

    RealMatrix singular = a;
    for (std::size_t j = 0; j < 5; ++j) singular(1, j) = 2.0 * singular(0, j);
    const auto degenerate = verify_det_division(singular, {0, 1}, {2, 3});
    EXPECT_TRUE(degenerate.pass) << degenerate.residual;

    const auto generic = verify_det_division(a, {0, 4}, {2, 5});
    EXPECT_TRUE(generic.pass) << generic.residual;
    EXPECT_THROW(verify_det_division(a, {0, 1}, {1, 2}), Error);
}

TEST(VerifyMatrixDetLemma, Cases) {
    const std::vector<double> zero(3, 0.0), e1{1, 0, 0};
    const auto m = random_matrix(3, 3, 5);
    const auto z = verify_matrix_det_lemma(m, zero, e1);
    EXPECT_TRUE(z.pass);
    EXPECT_NEAR(z.lhs, determinant(m), 1e-12);

    const auto id = verify_matrix_det_lemma(RealMatrix::identity(3), e1, e1);
    EXPECT_TRUE(id.pass);
    EXPECT_NEAR(id.lhs, 2.0, 1e-15);

    Rng rng(3);
    std::vector<double> u(5), v(5);
    for (auto& x : u) x = rng.normal();
    for (auto& x : v) x = rng.normal();
    EXPECT_TRUE(verify_matrix_det_lemma(random_matrix(5, 5, 6), u, v).pass);

    const auto singular = RealMatrix::from_rows({{1, 2}, {2, 4}});
    const std::vector<double> w{1, 1};
    try {
        verify_matrix_det_lemma(singular, w, w);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::IllConditioned);
    }
}

TEST(LowerBoundMatrix, ClosedForms) {
    const auto small = lower_bound_matrix(2, 0.5);
    const auto s = thin_svd(small).singular_values;
    EXPECT_NEAR(s[0], 1.5, 1e-12);
    EXPECT_NEAR(s[1], 0.5, 1e-12);

    for (std::size_t n : {2u, 5u, 17u}) {
        for (double eps : {0.01, 0.3, 0.9}) {
            const auto a = lower_bound_matrix(n, eps);
            EXPECT_NEAR(a.frobenius_norm_sq(), n + n * eps * eps, 1e-12 * n);
        }
    }
    EXPECT_THROW(lower_bound_matrix(1, 0.5), Error);
    EXPECT_THROW(lower_bound_matrix(3, 1.0), Error);
    EXPECT_THROW(lower_bound_matrix(3, 0.0), Error);
}

TEST(LowerBoundMatrix, SpectralRatioPerRow) {
    const std::size_t n = 25;
    const double eps = 0.1;
    const auto a = lower_bound_matrix(n, eps);
    const double sigma2 = thin_svd(a).singular_values[1];
    std::vector<double> ratios;
    for (std::size_t i = 0; i < n; ++i) {
        const std::vector<std::size_t> s{i};
        ratios.push_back(spectral_norm(residual_after_projection(a, s)) / sigma2);
    }
    for (double r : ratios) {
        EXPECT_GE(r, 2.5);
        EXPECT_NEAR(r, ratios.front(), 1e-9);
    }
}

TEST(LowerBoundMatrix, BlockGenerator) {
    const auto a = lower_bound_block_matrix(4, 0.2, 3);
    EXPECT_EQ(a.rows(), 12u);
    EXPECT_EQ(a.cols(), 15u);
    const auto s = thin_svd(a).singular_values;
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(s[j], std::sqrt(4.04), 1e-10);
    for (std::size_t j = 3; j < 12; ++j) EXPECT_NEAR(s[j], 0.2, 1e-10);
}

TEST(FaddeevLeverrier, Examples) {
    const auto id = faddeev_leverrier(RealMatrix::identity(2));
    EXPECT_DOUBLE_EQ(id[0], 1.0);
    EXPECT_DOUBLE_EQ(id[1], -2.0);
    const std::vector<double> d{4, 9};
    const auto diag = faddeev_leverrier(RealMatrix::diagonal(d));
    EXPECT_DOUBLE_EQ(diag[0], 36.0);
    EXPECT_DOUBLE_EQ(diag[1], -13.0);
    EXPECT_THROW(faddeev_leverrier(RealMatrix::identity(13)), Error);
}

TEST(FaddeevLeverrier, AgreesWithEigenvaluePath) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto g = gram(random_matrix(8, 6, 900 + seed));
        const auto fl = faddeev_leverrier(g.matrix());
        const auto cp = charpoly_direct(g);
        for (std::size_t j = 0; j <= 6; ++j) EXPECT_LE(relative_error(cp[j], fl[j]), 1e-7);
    }
}

TEST(TotalVariation, CountsUnsupportedSubsets) {
    const auto dist = brute_force_distribution(RealMatrix::identity(3), 2);
    std::map<Subset, std::size_t> exact{{{0, 1}, 1}, {{0, 2}, 1}, {{1, 2}, 1}};
    EXPECT_NEAR(total_variation(dist, exact, 3), 0.0, 1e-15);
    std::map<Subset, std::size_t> skewed{{{0, 1}, 3}};
    EXPECT_NEAR(total_variation(dist, skewed, 3), 2.0 / 3.0, 1e-15);
}
