#include "volsel/derand.hpp"

#include "volsel/charpoly.hpp"
#include "volsel/error.hpp"
#include "volsel/linalg.hpp"

#include <algorithm>
#include <string>

namespace volsel {

std::vector<ConditionalScore> conditional_scores(const GramMatrix& g, const RealMatrix& b,
                                                 std::size_t t, std::size_t k, double delta_zero,
                                                 const ExecutionOptions& exec) {
    const std::size_t n = b.cols();
    if (k == 0 || t == 0 || t > k) throw Error(ErrorKind::DomainError, "need 1 <= t <= k");
    if (k > n) throw Error(ErrorKind::RankError, "k exceeds column count");
    if (g.dim() != n) throw Error(ErrorKind::DomainError, "Gram dimension does not match B");
    const std::size_t top = n - k + t;

    std::vector<ConditionalScore> scores(b.rows());
    std::vector<char> nonzero(b.rows(), 0);
    parallel_for(b.rows(), exec.threads, [&](std::size_t i) {
        scores[i].row = i;
        const auto bi = b.row(i);
        if (squared_norm(bi) <= delta_zero) return;
        const auto cp = charpoly_direct(gram_after_projection(g, bi, delta_zero), g.trace());
        scores[i].numerator = cp.abs_coeff(top - 1);
        scores[i].denominator = cp.abs_coeff(top);
        nonzero[i] = 1;
    });

    double largest = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (nonzero[i]) largest = std::max(largest, scores[i].denominator);
    const double delta_coeff = 1e-12 * largest;
    bool any = false;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        scores[i].feasible = nonzero[i] && scores[i].denominator > delta_coeff;
        any = any || scores[i].feasible;
    }
    if (!any) {
        throw Error(ErrorKind::Degenerate, "no feasible row in round " + std::to_string(t));
    }
    return scores;
}

std::size_t argmin_score(const std::vector<ConditionalScore>& scores) {
    const ConditionalScore* best = nullptr;
    for (const auto& s : scores) {
        if (!s.feasible) continue;
        if (best == nullptr || s.numerator * best->denominator < best->numerator * s.denominator) {
            best = &s;
        }
    }
    if (best == nullptr) throw Error(ErrorKind::Degenerate, "no feasible row");
    return best->row;
}

double expected_residual_closed_form(const RealMatrix& a, std::size_t k) {
    const std::size_t n = a.cols();
    if (k == 0 || k > n) throw Error(ErrorKind::DomainError, "need 1 <= k <= n");
    if (k == n) return 0.0;
    const auto cp = charpoly_direct(gram(a));
    const double denominator = cp.abs_coeff(n - k);
    if (!(denominator > 0.0)) throw Error(ErrorKind::RankError, "k exceeds rank");
    return static_cast<double>(k + 1) * cp.abs_coeff(n - k - 1) / denominator;
}

SelectionResult derandomized_select(const RealMatrix& a, std::size_t k,
                                    const ExecutionOptions& exec) {
    const std::size_t rank = numerical_rank(a);
    if (k == 0 || k > rank) {
        throw Error(ErrorKind::RankError, "k = " + std::to_string(k) + " but numerical rank is " +
                                              std::to_string(rank));
    }
    const double delta_zero = zero_row_threshold(a);
    SelectionResult result;
    RealMatrix b = a;
    GramMatrix g = gram(a);
    for (std::size_t t = 1; t <= k; ++t) {
        const auto scores = conditional_scores(g, b, t, k, delta_zero, exec);
        const std::size_t chosen = argmin_score(scores);
        result.indices.push_back(chosen);
        result.conditional_expectations.push_back(static_cast<double>(k - t + 1) *
                                                  scores[chosen].ratio());
        const std::vector<double> bi(b.row(chosen).begin(), b.row(chosen).end());
        g = gram_after_projection(g, bi, delta_zero);
        b = project_out_row(b, chosen, delta_zero);
    }
    return result;
}

} // namespace volsel
