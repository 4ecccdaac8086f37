#include "volsel/matrix.hpp"

#include "volsel/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace volsel {

namespace {

void require_shape(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) {
        throw Error(ErrorKind::DomainError, "matrix dimensions must be at least 1x1");
    }
}

} // namespace

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    require_shape(rows, cols);
    data_.assign(rows * cols, 0.0);
}

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    require_shape(rows, cols);
    if (data_.size() != rows * cols) {
        throw Error(ErrorKind::DomainError, "data length " + std::to_string(data_.size()) +
                                                " does not match " + std::to_string(rows) + "x" +
                                                std::to_string(cols));
    }
    for (std::size_t k = 0; k < data_.size(); ++k) {
        if (!std::isfinite(data_[k])) {
            throw Error(ErrorKind::NonFinite, "entry (" + std::to_string(k / cols) + ", " +
                                                  std::to_string(k % cols) + ") is not finite");
        }
    }
}

RealMatrix RealMatrix::identity(std::size_t n) {
    RealMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

RealMatrix RealMatrix::diagonal(std::span<const double> diag) {
    RealMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

RealMatrix RealMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    std::vector<std::vector<double>> copy;
    copy.reserve(rows.size());
    for (const auto& r : rows) copy.emplace_back(r);
    return from_rows(copy);
}

RealMatrix RealMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw Error(ErrorKind::DomainError, "no rows given");
    const std::size_t cols = rows.front().size();
    std::vector<double> data;
    data.reserve(rows.size() * cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) {
            throw Error(ErrorKind::NonRectangular, "row " + std::to_string(i) + " has " +
                                                       std::to_string(rows[i].size()) +
                                                       " entries, expected " + std::to_string(cols));
        }
        data.insert(data.end(), rows[i].begin(), rows[i].end());
    }
    return RealMatrix(rows.size(), cols, std::move(data));
}

RealMatrix RealMatrix::transpose() const {
    RealMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

RealMatrix RealMatrix::select_rows(std::span<const std::size_t> indices) const {
    RealMatrix out(indices.size(), cols_);
    for (std::size_t r = 0; r < indices.size(); ++r) {
        if (indices[r] >= rows_) throw Error(ErrorKind::DomainError, "row index out of range");
        std::ranges::copy(row(indices[r]), out.row(r).begin());
    }
    return out;
}

double RealMatrix::frobenius_norm_sq() const noexcept { return squared_norm(data_); }

double RealMatrix::max_abs() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

RealMatrix operator+(const RealMatrix& a, const RealMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error(ErrorKind::DomainError, "shape mismatch in addition");
    RealMatrix c = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
    return c;
}

RealMatrix operator-(const RealMatrix& a, const RealMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error(ErrorKind::DomainError, "shape mismatch in subtraction");
    RealMatrix c = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) -= b(i, j);
    return c;
}

RealMatrix operator*(const RealMatrix& a, const RealMatrix& b) {
    if (a.cols() != b.rows()) throw Error(ErrorKind::DomainError, "shape mismatch in product");
    RealMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ci = c.row(i);
        for (std::size_t l = 0; l < a.cols(); ++l) {
            const double ail = a(i, l);
            if (ail == 0.0) continue;
            auto bl = b.row(l);
            for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += ail * bl[j];
        }
    }
    return c;
}

RealMatrix operator*(double s, const RealMatrix& a) {
    RealMatrix c = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (auto& v : c.row(i)) v *= s;
    return c;
}

std::vector<double> multiply(const RealMatrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) throw Error(ErrorKind::DomainError, "shape mismatch in mat-vec");
    std::vector<double> y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
    return y;
}

double dot(std::span<const double> x, std::span<const double> y) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double squared_norm(std::span<const double> x) noexcept { return dot(x, x); }

RealMatrix transpose_multiply(const RealMatrix& a, const RealMatrix& b) {
    if (a.rows() != b.rows()) throw Error(ErrorKind::DomainError, "shape mismatch in A^T B");
    RealMatrix c(a.cols(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto ar = a.row(r);
        auto br = b.row(r);
        for (std::size_t i = 0; i < a.cols(); ++i) {
            const double v = ar[i];
            if (v == 0.0) continue;
            auto ci = c.row(i);
            for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += v * br[j];
        }
    }
    return c;
}

GramMatrix GramMatrix::from_symmetric(RealMatrix m) {
    if (m.rows() != m.cols()) throw Error(ErrorKind::DomainError, "Gram matrix must be square");
    const double tol = 1e-12 * m.max_abs();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j)
            if (std::abs(m(i, j) - m(j, i)) > tol)
                throw Error(ErrorKind::DomainError, "Gram matrix is not symmetric");
    return GramMatrix(std::move(m));
}

double GramMatrix::trace() const noexcept {
    double t = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) t += m_(i, i);
    return t;
}

} // namespace volsel
