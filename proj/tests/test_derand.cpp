#include "test_support.hpp"

#include "volsel/derand.hpp"
#include "volsel/error.hpp"
#include "volsel/linalg.hpp"
#include "volsel/oracle.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace volsel;
using volsel::testing::random_matrix;
using volsel::testing::relative_error;

namespace {

double frobenius_residual(const RealMatrix& a, const std::vector<std::size_t>& s) {
    return residual_after_projection(a, s).frobenius_norm_sq();
}

} // namespace

TEST(ConditionalScores, LastRoundRatioIsResidual) {
    const auto a = random_matrix(6, 4, 5);
    const double delta = zero_row_threshold(a);
    const auto b = project_out_row(a, 0, delta);
    const auto scores = conditional_scores(gram(b), b, 2, 2, delta);
    for (std::size_t i = 1; i < 6; ++i) {
        ASSERT_TRUE(scores[i].feasible);
        const std::vector<std::size_t> s{0, i};
        EXPECT_LE(relative_error(scores[i].ratio(), frobenius_residual(a, s)), 1e-9);
    }
    EXPECT_FALSE(scores[0].feasible);
}

TEST(ConditionalScores, IdentityTies) {
    const auto a = RealMatrix::identity(3);
    const auto scores = conditional_scores(gram(a), a, 1, 1, zero_row_threshold(a));
    for (const auto& s : scores) EXPECT_NEAR(s.ratio(), 2.0, 1e-14);
    EXPECT_EQ(argmin_score(scores), 0u);
}

TEST(ConditionalScores, MatchOracleConditionalExpectation) {
    const auto a = random_matrix(6, 4, 7);
    const std::size_t k = 2;
    const double delta = zero_row_threshold(a);
    const auto round1 = conditional_scores(gram(a), a, 1, k, delta);
    for (std::size_t i = 0; i < 6; ++i) {
        const double oracle_value = oracle::conditional_expected_residual(a, k, {i});
        EXPECT_LE(relative_error(2.0 * round1[i].ratio(), oracle_value), 1e-8);
    }
    const auto b = project_out_row(a, 4, delta);
    const auto round2 = conditional_scores(gram(b), b, 2, k, delta);
    for (std::size_t i = 0; i < 6; ++i) {
        if (i == 4) continue;
        EXPECT_LE(relative_error(round2[i].ratio(), oracle::conditional_expected_residual(a, k, {4, i})), 1e-8);
    }
}

TEST(ConditionalScores, InfeasibleRowsAreSkipped) {
    const auto a = RealMatrix::from_rows({{1, 0, 0}, {2, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    const double delta = zero_row_threshold(a);
    const auto b = project_out_row(project_out_row(a, 2, delta), 3, delta);
    const auto scores = conditional_scores(gram(b), b, 3, 3, delta);
    EXPECT_FALSE(scores[2].feasible);
    EXPECT_FALSE(scores[3].feasible);
    EXPECT_TRUE(scores[0].feasible);
    EXPECT_EQ(argmin_score(scores), 0u);
}

TEST(ArgminScore, CrossMultiplicationAndTies) {
    std::vector<ConditionalScore> scores{
        {0, 1.0, 1.0, false}, {1, 3.0, 2.0, true}, {2, 1.5, 1.0, true}, {3, 2.0, 4.0, true}, {4, 1.0, 2.0, true}};
    EXPECT_EQ(argmin_score(scores), 3u);
    for (auto& s : scores) s.feasible = false;
    EXPECT_THROW(argmin_score(scores), Error);
}

TEST(ExpectedResidualClosedForm, MatchesEnumeration) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto a = random_matrix(7, 4, 200 + seed);
        for (std::size_t k = 1; k <= 3; ++k)
            EXPECT_LE(relative_error(expected_residual_closed_form(a, k), oracle::expected_residual(a, k)), 1e-9);
        EXPECT_EQ(expected_residual_closed_form(a, 4), 0.0);
    }
}

TEST(DerandomizedSelect, DiagonalExample) {
    const std::vector<double> d{3, 2, 1};
    const auto a = RealMatrix::diagonal(d);
    const auto r = derandomized_select(a, 2);
    EXPECT_EQ(r.indices, (std::vector<std::size_t>{0, 1}));
    EXPECT_NEAR(frobenius_residual(a, r.indices), 1.0, 1e-12);
    EXPECT_NEAR(r.conditional_expectations.back(), 1.0, 1e-12);
    EXPECT_TRUE(r.per_round_marginals.empty());
}

TEST(DerandomizedSelect, LowerBoundMatrixOneRow) {
    const auto a = oracle::lower_bound_matrix(4, 0.1);
    const auto r = derandomized_select(a, 1);
    const double residual = frobenius_residual(a, r.indices);
    const double tail = tail_energy(thin_svd(a), 1);
    EXPECT_LE(residual, 2.0 * tail);
    EXPECT_NEAR(r.conditional_expectations.back(), residual, 1e-10);
}

TEST(DerandomizedSelect, BoundsAndMonotoneConditioning) {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        Rng rng(seed);
        const std::size_t n = volsel::testing::uniform_int(rng, 2, 6);
        const std::size_t m = volsel::testing::uniform_int(rng, n, 12);
        const std::size_t k = volsel::testing::uniform_int(rng, 1, n);
        const auto a = random_matrix(m, n, 700 + seed);
        const auto r = derandomized_select(a, k);
        ASSERT_EQ(r.indices.size(), k);
        EXPECT_EQ(std::set<std::size_t>(r.indices.begin(), r.indices.end()).size(), k);

        const auto svd = thin_svd(a);
        const double residual = frobenius_residual(a, r.indices);
        EXPECT_LE(residual, (k + 1) * tail_energy(svd, k) * (1 + 1e-8) + 1e-12);
        const double sigma = k < svd.singular_values.size() ? svd.singular_values[k] : 0.0;
        const double spectral = spectral_norm(residual_after_projection(a, r.indices));
        EXPECT_LE(spectral * spectral, (k + 1) * (n - k) * sigma * sigma * (1 + 1e-8) + 1e-12);

        double previous = expected_residual_closed_form(a, k);
        for (double e : r.conditional_expectations) {
            EXPECT_LE(e, previous * (1 + 1e-8) + 1e-12);
            previous = e;
        }
        EXPECT_NEAR(r.conditional_expectations.back(), residual, 1e-8 * (1 + residual));
    }
}

TEST(DerandomizedSelect, AgreesWithExhaustiveGreedyUpToTies) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed + 50);
        const std::size_t n = volsel::testing::uniform_int(rng, 2, 5);
        const std::size_t m = volsel::testing::uniform_int(rng, n, 8);
        const std::size_t k = volsel::testing::uniform_int(rng, 1, std::min<std::size_t>(3, n));
        const auto a = random_matrix(m, n, 900 + seed);
        const auto ours = derandomized_select(a, k).indices;
        const auto greedy = oracle::greedy_conditional_selection(a, k);
        if (ours == greedy) continue;
        // A different choice is only acceptable when the two prefixes tie.
        for (std::size_t t = 1; t <= k; ++t) {
            const oracle::Subset p1(ours.begin(), ours.begin() + t), p2(greedy.begin(), greedy.begin() + t);
            EXPECT_NEAR(oracle::conditional_expected_residual(a, k, p1),
                        oracle::conditional_expected_residual(a, k, p2), 1e-8 * a.frobenius_norm_sq())
                << "m=" << m << " n=" << n << " k=" << k << " t=" << t;
        }
    }
}

TEST(DerandomizedSelect, ScalingInvariance) {
    const auto a = random_matrix(10, 5, 3);
    const auto base = derandomized_select(a, 3).indices;
    for (double gamma : {1e-3, 0.5, 7.0, 1e4}) EXPECT_EQ(derandomized_select(gamma * a, 3).indices, base);
}

TEST(DerandomizedSelect, DeterministicAcrossThreads) {
    const auto a = random_matrix(30, 6, 9);
    EXPECT_EQ(derandomized_select(a, 4), derandomized_select(a, 4, ExecutionOptions{4}));
}

TEST(DerandomizedSelect, RankError) {
    const auto a = RealMatrix::from_rows({{1, 0, 0}, {2, 0, 0}, {0, 1, 0}});
    try {
        derandomized_select(a, 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::RankError);
    }
}
