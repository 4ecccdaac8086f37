#pragma once

#include "volsel/charpoly.hpp"
#include "volsel/matrix.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <vector>

namespace volsel::oracle {

/// Brute-force ground truth for the samplers and selectors. Everything here
/// enumerates subsets; nothing calls into the sampler or selector code paths.

using Subset = std::vector<std::size_t>;

/// Largest C(m, k) the enumerating routines accept.
inline constexpr double kEnumerationLimit = 1e6;

double binomial(std::size_t m, std::size_t k) noexcept;

/// Calls visit(S) for every k-subset of [0, m) in lexicographic order.
void for_each_subset(std::size_t m, std::size_t k, const std::function<void(const Subset&)>& visit);

/// Determinant by LU with partial pivoting.
double determinant(const RealMatrix& m);
/// Solves M x = b by LU with partial pivoting.
std::vector<double> solve(const RealMatrix& m, std::span<const double> b);

/// det(A_S A_S^T) through the |S| x |S| Gram of the rows; 1 for the empty set,
/// clamped at 0 from below.
double subset_determinant(const RealMatrix& a, std::span<const std::size_t> subset);

/// Volumes at or below this are treated as zero: 1e-12 * (||A||_F^2)^k.
double volume_threshold(const RealMatrix& a, std::size_t k);

struct SubsetDistribution {
    std::size_t k = 0;
    std::vector<Subset> subsets;       // lexicographic
    std::vector<double> probabilities; // aligned with subsets
    double normalizer = 0.0;           // sum_S det(A_S A_S^T)

    double probability(const Subset& sorted_subset) const;
};

/// Exact volume-sampling distribution over k-subsets. Throws TooLarge when
/// C(m, k) exceeds the enumeration limit.
SubsetDistribution brute_force_distribution(const RealMatrix& a, std::size_t k);

/// P(X_t = i | X_1..X_{t-1} = prefix) for every row i, with t = |prefix| + 1,
/// under the ordered-tuple extension of volume sampling. Throws
/// InfeasiblePrefix when the prefix has probability zero.
std::vector<double> exact_marginals(const RealMatrix& a, std::size_t k, const Subset& prefix);
double exact_marginal(const RealMatrix& a, std::size_t k, const Subset& prefix, std::size_t i);

/// E ||A - pi_S(A)||_F^2 over S ~ volume sampling, by enumeration.
double expected_residual(const RealMatrix& a, std::size_t k);

/// E[ ||A - pi_S(A)||_F^2 | X_1..X_t = prefix ], by enumeration.
double conditional_expected_residual(const RealMatrix& a, std::size_t k, const Subset& prefix);

/// The method of conditional expectations evaluated entirely by enumeration:
/// each round picks the lowest-index row minimising the conditional expectation.
Subset greedy_conditional_selection(const RealMatrix& a, std::size_t k);

struct LemmaCheck {
    bool pass = false;
    double residual = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
};

/// det(A_{S u T} A_{S u T}^T) against det(A_S A_S^T) det(B_T B_T^T), B = A - pi_S(A).
/// Values below 1e-6 of the Hadamard bound prod ||a_i||^2 are compared on that
/// absolute scale. Passes at relative residual <= 1e-8.
LemmaCheck verify_det_division(const RealMatrix& a, const Subset& s, const Subset& t);

/// det(M + u v^T) against (1 + v^T M^{-1} u) det(M). Throws IllConditioned when
/// the condition number of M exceeds 1e12.
LemmaCheck verify_matrix_det_lemma(const RealMatrix& m, std::span<const double> u,
                                   std::span<const double> v);

/// n x (n+1) matrix with a first column of ones and eps at (i, i+1).
RealMatrix lower_bound_matrix(std::size_t n, double eps);
/// `copies` block-diagonal copies of lower_bound_matrix(n, eps).
RealMatrix lower_bound_block_matrix(std::size_t n, double eps, std::size_t copies);

/// Characteristic polynomial by the Faddeev-LeVerrier recurrence; n <= 12.
CharPolyCoeffs faddeev_leverrier(const RealMatrix& m);

/// Half the L1 distance between the exact distribution and empirical counts.
double total_variation(const SubsetDistribution& exact, const std::map<Subset, std::size_t>& counts,
                       std::size_t trials);

} // namespace volsel::oracle
