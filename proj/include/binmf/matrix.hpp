#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "binmf/errors.hpp"

namespace binmf {

/// Dense row-major matrix of doubles with no sign constraint. Used for
/// gradients and intermediate algebra; the constrained factors live in
/// NonNegMatrix below.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);  // zero-filled
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool same_shape(const Matrix& other) const noexcept {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const double* data() const noexcept { return data_.data(); }
    double* data() noexcept { return data_.data(); }
    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(data_.data() + i * cols_, cols_);
    }

    std::string shape_str() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Dense nonnegative matrix. Nonnegativity and finiteness are checked at
/// construction with zero tolerance: a negative or non-finite entry is an
/// error, never clamped. Immutable after construction.
class NonNegMatrix {
public:
    NonNegMatrix() = default;
    explicit NonNegMatrix(Matrix values);
    NonNegMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);
    static NonNegMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static NonNegMatrix zeros(std::size_t rows, std::size_t cols);

    std::size_t rows() const noexcept { return values_.rows(); }
    std::size_t cols() const noexcept { return values_.cols(); }
    std::size_t size() const noexcept { return values_.size(); }
    double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }
    const double* data() const noexcept { return values_.data(); }
    const Matrix& values() const noexcept { return values_; }
    Matrix to_matrix() const { return values_; }
    std::string shape_str() const { return values_.shape_str(); }
    bool same_shape(const NonNegMatrix& other) const noexcept {
        return values_.same_shape(other.values_);
    }

private:
    Matrix values_;
};

struct GridShape {
    std::size_t height = 0;
    std::size_t width = 0;
};

/// Input data: L spectral bands by T samples, optionally carrying the pixel
/// grid the samples were flattened from (row-major over the grid).
class Dataset {
public:
    explicit Dataset(NonNegMatrix x, std::optional<GridShape> grid = std::nullopt);

    const NonNegMatrix& x() const noexcept { return x_; }
    std::size_t bands() const noexcept { return x_.rows(); }    // L
    std::size_t samples() const noexcept { return x_.cols(); }  // T
    const std::optional<GridShape>& grid() const noexcept { return grid_; }

private:
    NonNegMatrix x_;
    std::optional<GridShape> grid_;
};

/// Copy of column j; the result never aliases the source.
std::vector<double> column(const Matrix& m, std::size_t j);
std::vector<double> column(const NonNegMatrix& m, std::size_t j);

Matrix matmul(const Matrix& a, const Matrix& b);
NonNegMatrix matmul(const NonNegMatrix& a, const NonNegMatrix& b);
/// aᵀ·b without forming the transpose.
Matrix matmul_at_b(const Matrix& a, const Matrix& b);
/// a·bᵀ without forming the transpose.
Matrix matmul_a_bt(const Matrix& a, const Matrix& b);

double frobenius_sq_diff(const Matrix& a, const Matrix& b);
double frobenius_sq_diff(const NonNegMatrix& a, const NonNegMatrix& b);

}  // namespace binmf
