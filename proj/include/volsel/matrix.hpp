#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace volsel {

/// Dense row-major real matrix. Dimensions are at least 1x1 and every entry
/// admitted through a constructor is finite.
class RealMatrix {
public:
    RealMatrix(std::size_t rows, std::size_t cols);
    RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static RealMatrix identity(std::size_t n);
    static RealMatrix diagonal(std::span<const double> diag);
    static RealMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static RealMatrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

    std::span<const double> data() const noexcept { return data_; }

    RealMatrix transpose() const;
    RealMatrix select_rows(std::span<const std::size_t> indices) const;

    double frobenius_norm_sq() const noexcept;
    double max_abs() const noexcept;

    bool operator==(const RealMatrix&) const = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

RealMatrix operator+(const RealMatrix& a, const RealMatrix& b);
RealMatrix operator-(const RealMatrix& a, const RealMatrix& b);
RealMatrix operator*(const RealMatrix& a, const RealMatrix& b);
RealMatrix operator*(double s, const RealMatrix& a);

std::vector<double> multiply(const RealMatrix& a, std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y) noexcept;
double squared_norm(std::span<const double> x) noexcept;

/// A^T B without forming the transpose.
RealMatrix transpose_multiply(const RealMatrix& a, const RealMatrix& b);

/// Symmetric n x n matrix, typically B^T B for some B. Symmetry is checked on
/// construction; positive semidefiniteness is a caller contract.
class GramMatrix {
public:
    static GramMatrix from_symmetric(RealMatrix m);

    std::size_t dim() const noexcept { return m_.rows(); }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    const RealMatrix& matrix() const noexcept { return m_; }
    double trace() const noexcept;

private:
    explicit GramMatrix(RealMatrix m) : m_(std::move(m)) {}
    friend GramMatrix gram(const RealMatrix& a);
    friend GramMatrix gram_after_projection(const GramMatrix&, std::span<const double>, double);

    RealMatrix m_;
};

} // namespace volsel
