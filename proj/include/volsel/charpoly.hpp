#pragma once

#include "volsel/matrix.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace volsel {

/// Coefficients of det(xI - M) = sum_j c_j x^j, stored c_0 .. c_n with c_n = 1.
class CharPolyCoeffs {
public:
    explicit CharPolyCoeffs(std::vector<double> coeffs);

    std::size_t degree() const noexcept { return coeffs_.size() - 1; }
    double operator[](std::size_t j) const { return coeffs_.at(j); }
    double abs_coeff(std::size_t j) const;
    std::span<const double> coeffs() const noexcept { return coeffs_; }

private:
    std::vector<double> coeffs_;
};

/// Elementary symmetric sums e_0 .. e_n of lambda, by the additive recurrence.
std::vector<double> elementary_symmetric(std::span<const double> lambdas);

/// prod_l (x - lambda_l). Negative values above -1e-9 * max(sum|lambda|, scale)
/// are clipped to zero; anything more negative is a DomainError. Pass the trace
/// of the matrix the values were derived from as scale when they may be pure
/// rounding noise.
CharPolyCoeffs charpoly_from_eigenvalues(std::span<const double> lambdas, double scale = 0.0);

/// Characteristic polynomial of a symmetric PSD matrix through its eigenvalues.
CharPolyCoeffs charpoly_direct(const GramMatrix& m, double scale = 0.0);

/// sum over k-subsets S of det(A_S A_S^T) = |c_{n-k}(A^T A)|, 1 <= k <= n.
double subset_det_sum(const RealMatrix& a, std::size_t k);

} // namespace volsel
