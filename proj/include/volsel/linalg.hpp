#pragma once

#include "volsel/matrix.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace volsel {

/// Rows with squared norm at or below 1e-12 * ||A||_F^2 of the original input
/// are treated as zero. Multi-round algorithms fix this once, from A.
double zero_row_threshold(const RealMatrix& a) noexcept;

GramMatrix gram(const RealMatrix& a);

/// C_i = B - B b_i b_i^T / ||b_i||^2. Row i of the result is set to exactly zero.
/// Throws ZeroRow when ||b_i||^2 <= delta_zero.
RealMatrix project_out_row(const RealMatrix& b, std::size_t i, double delta_zero);
RealMatrix project_out_row(const RealMatrix& b, std::size_t i);

/// C_i^T C_i from G = B^T B and the row b_i, as a symmetric rank-two update of G.
GramMatrix gram_after_projection(const GramMatrix& g, std::span<const double> b_i,
                                 double delta_zero);

/// pi_S(A): every row of A projected onto span{a_i : i in S}. The basis of the
/// span is built by modified Gram-Schmidt, dropping directions whose residual
/// norm is at or below sqrt(delta_zero), so rank-deficient A_S is fine.
RealMatrix project_onto_subset(const RealMatrix& a, std::span<const std::size_t> subset,
                               double delta_zero);
RealMatrix project_onto_subset(const RealMatrix& a, std::span<const std::size_t> subset);

/// A - pi_S(A).
RealMatrix residual_after_projection(const RealMatrix& a, std::span<const std::size_t> subset);

struct SymmetricEigen {
    std::vector<double> values;  // nonincreasing
    RealMatrix vectors;          // column j is the eigenvector for values[j]
};

/// Cyclic Jacobi. Stops once the off-diagonal Frobenius mass is at most
/// 1e-14 * ||G||_F; throws ConvergenceFailure after 100 sweeps.
SymmetricEigen jacobi_eigen(const GramMatrix& g);

/// Eigenvalues only, nonincreasing, by Householder tridiagonalisation followed
/// by implicit QL with shifts.
std::vector<double> symmetric_eigenvalues(const GramMatrix& g);

struct SVDFactors {
    std::vector<double> singular_values;      // sigma_1 >= ... >= sigma_r > 0
    std::vector<std::vector<double>> left;    // u_j, length m
    std::vector<std::vector<double>> right;   // v_j, length n
    std::size_t rows = 0;
    std::size_t cols = 0;

    std::size_t rank() const noexcept { return singular_values.size(); }
    RealMatrix reconstruct() const;
};

/// Thin SVD by one-sided (Hestenes) Jacobi, which is cyclic Jacobi on A^T A
/// carried out implicitly on the columns of A. Directions with
/// sigma <= sqrt(delta_zero) are dropped.
SVDFactors thin_svd(const RealMatrix& a, double delta_zero);
SVDFactors thin_svd(const RealMatrix& a);

double frobenius_norm(const RealMatrix& a) noexcept;
double spectral_norm(const RealMatrix& a);
std::size_t numerical_rank(const RealMatrix& a);

/// Truncated SVD sum_{j<=k} sigma_j u_j v_j^T. Throws RankError if k exceeds
/// the numerical rank or is zero.
RealMatrix best_rank_k(const RealMatrix& a, std::size_t k);

/// ||A - A_k||_F^2 = sum_{j>k} sigma_j^2, from the singular values of A.
double tail_energy(const SVDFactors& svd, std::size_t k) noexcept;

} // namespace volsel
