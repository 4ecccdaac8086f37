#include "volsel/linalg.hpp"

#include "volsel/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace volsel {

double zero_row_threshold(const RealMatrix& a) noexcept { return 1e-12 * a.frobenius_norm_sq(); }

GramMatrix gram(const RealMatrix& a) {
    RealMatrix g(a.cols(), a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto ar = a.row(r);
        for (std::size_t i = 0; i < a.cols(); ++i) {
            const double v = ar[i];
            if (v == 0.0) continue;
            for (std::size_t j = i; j < a.cols(); ++j) g(i, j) += v * ar[j];
        }
    }
    for (std::size_t i = 0; i < a.cols(); ++i)
        for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
    return GramMatrix(std::move(g));
}

RealMatrix project_out_row(const RealMatrix& b, std::size_t i, double delta_zero) {
    if (i >= b.rows()) throw Error(ErrorKind::DomainError, "row index out of range");
    const auto bi = b.row(i);
    const double norm_sq = squared_norm(bi);
    if (norm_sq <= delta_zero) {
        throw Error(ErrorKind::ZeroRow, "row " + std::to_string(i) + " has squared norm " +
                                            std::to_string(norm_sq));
    }
    RealMatrix c = b;
    for (std::size_t r = 0; r < b.rows(); ++r) {
        if (r == i) continue;
        const double coef = dot(b.row(r), bi) / norm_sq;
        auto cr = c.row(r);
        for (std::size_t j = 0; j < b.cols(); ++j) cr[j] -= coef * bi[j];
    }
    std::ranges::fill(c.row(i), 0.0);
    return c;
}

RealMatrix project_out_row(const RealMatrix& b, std::size_t i) {
    return project_out_row(b, i, zero_row_threshold(b));
}

GramMatrix gram_after_projection(const GramMatrix& g, std::span<const double> b_i,
                                 double delta_zero) {
    const std::size_t n = g.dim();
    if (b_i.size() != n) throw Error(ErrorKind::DomainError, "row length does not match Gram");
    const double beta = squared_norm(b_i);
    if (beta <= delta_zero) {
        throw Error(ErrorKind::ZeroRow, "row has squared norm " + std::to_string(beta));
    }
    // G - (w b^T + b w^T)/beta + gamma b b^T / beta^2 with w = G b, gamma = b^T G b.
    const auto w = multiply(g.matrix(), b_i);
    const double gamma = dot(b_i, w);
    const double inv = 1.0 / beta;
    const double scale = gamma * inv * inv;
    RealMatrix c(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t s = r; s < n; ++s) {
            const double v = g(r, s) - (w[r] * b_i[s] + b_i[r] * w[s]) * inv +
                             scale * b_i[r] * b_i[s];
            c(r, s) = v;
            c(s, r) = v;
        }
    }
    return GramMatrix(std::move(c));
}

namespace {

/// Orthonormal basis (as rows) of span{a_i : i in subset}, two passes of MGS.
std::vector<std::vector<double>> row_space_basis(const RealMatrix& a,
                                                 std::span<const std::size_t> subset,
                                                 double delta_zero) {
    const double drop = std::sqrt(delta_zero);
    std::vector<std::vector<double>> basis;
    for (std::size_t idx : subset) {
        if (idx >= a.rows()) throw Error(ErrorKind::DomainError, "subset index out of range");
        std::vector<double> v(a.row(idx).begin(), a.row(idx).end());
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& q : basis) {
                const double c = dot(q, v);
                for (std::size_t j = 0; j < v.size(); ++j) v[j] -= c * q[j];
            }
        }
        const double nrm = std::sqrt(squared_norm(v));
        if (nrm <= drop) continue;
        for (auto& x : v) x /= nrm;
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace

RealMatrix project_onto_subset(const RealMatrix& a, std::span<const std::size_t> subset,
                               double delta_zero) {
    const auto basis = row_space_basis(a, subset, delta_zero);
    RealMatrix p(a.rows(), a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto pr = p.row(r);
        for (const auto& q : basis) {
            const double c = dot(a.row(r), q);
            for (std::size_t j = 0; j < a.cols(); ++j) pr[j] += c * q[j];
        }
    }
    return p;
}

RealMatrix project_onto_subset(const RealMatrix& a, std::span<const std::size_t> subset) {
    return project_onto_subset(a, subset, zero_row_threshold(a));
}

RealMatrix residual_after_projection(const RealMatrix& a, std::span<const std::size_t> subset) {
    return a - project_onto_subset(a, subset);
}

double frobenius_norm(const RealMatrix& a) noexcept { return std::sqrt(a.frobenius_norm_sq()); }

double spectral_norm(const RealMatrix& a) {
    const auto svd = thin_svd(a);
    return svd.rank() == 0 ? 0.0 : svd.singular_values.front();
}

std::size_t numerical_rank(const RealMatrix& a) { return thin_svd(a).rank(); }

RealMatrix best_rank_k(const RealMatrix& a, std::size_t k) {
    const auto svd = thin_svd(a);
    if (k == 0 || k > svd.rank()) {
        throw Error(ErrorKind::RankError, "k = " + std::to_string(k) + " but numerical rank is " +
                                              std::to_string(svd.rank()));
    }
    RealMatrix out(a.rows(), a.cols());
    for (std::size_t j = 0; j < k; ++j) {
        const double s = svd.singular_values[j];
        for (std::size_t r = 0; r < a.rows(); ++r) {
            const double c = s * svd.left[j][r];
            auto row = out.row(r);
            for (std::size_t col = 0; col < a.cols(); ++col) row[col] += c * svd.right[j][col];
        }
    }
    return out;
}

double tail_energy(const SVDFactors& svd, std::size_t k) noexcept {
    double t = 0.0;
    for (std::size_t j = svd.rank(); j-- > k;) t += svd.singular_values[j] * svd.singular_values[j];
    return t;
}

RealMatrix SVDFactors::reconstruct() const {
    RealMatrix out(rows, cols);
    for (std::size_t j = 0; j < rank(); ++j) {
        for (std::size_t r = 0; r < rows; ++r) {
            const double c = singular_values[j] * left[j][r];
            auto row = out.row(r);
            for (std::size_t col = 0; col < cols; ++col) row[col] += c * right[j][col];
        }
    }
    return out;
}

} // namespace volsel
