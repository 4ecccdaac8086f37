#pragma once

#include "volsel/matrix.hpp"
#include "volsel/parallel.hpp"
#include "volsel/sampler.hpp"

#include <cstddef>
#include <vector>

namespace volsel {

/// Score of choosing row i in round t: |c_{n-k+t-1}(C_i^T C_i)| / |c_{n-k+t}(C_i^T C_i)|.
/// (k-t+1) * ratio is the expected final residual given the prefix and X_t = i.
struct ConditionalScore {
    std::size_t row = 0;
    double numerator = 0.0;
    double denominator = 0.0;
    bool feasible = false;

    double ratio() const noexcept { return feasible ? numerator / denominator : 0.0; }
};

/// One score per row of B. A row is infeasible when ||b_i||^2 <= delta_zero or
/// its denominator is at most 1e-12 times the largest denominator of the round.
/// Throws Degenerate when no row is feasible.
std::vector<ConditionalScore> conditional_scores(const GramMatrix& g, const RealMatrix& b,
                                                 std::size_t t, std::size_t k, double delta_zero,
                                                 const ExecutionOptions& exec = {});

/// Feasible row with the smallest ratio, compared by cross-multiplication; ties
/// go to the lowest index.
std::size_t argmin_score(const std::vector<ConditionalScore>& scores);

/// (k+1) |c_{n-k-1}(A^T A)| / |c_{n-k}(A^T A)|: the expected residual
/// ||A - pi_S(A)||_F^2 under volume sampling of k-subsets.
double expected_residual_closed_form(const RealMatrix& a, std::size_t k);

/// Greedy method of conditional expectations. The returned
/// conditional_expectations[t-1] is the expected final residual after round t;
/// the last entry equals ||A - pi_S(A)||_F^2.
SelectionResult derandomized_select(const RealMatrix& a, std::size_t k,
                                    const ExecutionOptions& exec = {});

} // namespace volsel
