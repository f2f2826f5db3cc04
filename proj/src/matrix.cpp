#include "binmf/matrix.hpp"

#include <cmath>
#include <utility>

namespace binmf {

namespace {

std::string shape_string(std::size_t rows, std::size_t cols) {
    return std::to_string(rows) + "x" + std::to_string(cols);
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw ShapeError("matrix " + shape_string(rows_, cols_) + " requires " +
                         std::to_string(rows_ * cols_) + " values, got " +
                         std::to_string(data_.size()));
    }
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<double> data;
    data.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c) {
            throw ShapeError("ragged row initializer: expected " + std::to_string(c) +
                             " columns, got " + std::to_string(row.size()));
        }
        data.insert(data.end(), row.begin(), row.end());
    }
    return Matrix(r, c, std::move(data));
}

std::string Matrix::shape_str() const { return shape_string(rows_, cols_); }

NonNegMatrix::NonNegMatrix(Matrix values) : values_(std::move(values)) {
    const double* p = values_.data();
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(p[i])) {
            throw NumericError("non-finite entry at flat index " + std::to_string(i) +
                               " in " + values_.shape_str() + " matrix");
        }
        if (p[i] < 0.0) {
            throw DomainError("negative entry " + std::to_string(p[i]) + " at flat index " +
                              std::to_string(i) + " in " + values_.shape_str() + " matrix");
        }
    }
}

NonNegMatrix::NonNegMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : NonNegMatrix(Matrix(rows, cols, std::move(data))) {}

NonNegMatrix NonNegMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    return NonNegMatrix(Matrix::from_rows(rows));
}

NonNegMatrix NonNegMatrix::zeros(std::size_t rows, std::size_t cols) {
    return NonNegMatrix(Matrix(rows, cols));
}

Dataset::Dataset(NonNegMatrix x, std::optional<GridShape> grid)
    : x_(std::move(x)), grid_(grid) {
    if (x_.rows() < 1 || x_.cols() < 1) {
        throw ShapeError("dataset requires at least one band and one sample, got " +
                         x_.shape_str());
    }
    if (grid_ && grid_->height * grid_->width != x_.cols()) {
        throw ShapeError("grid " + std::to_string(grid_->height) + "x" +
                         std::to_string(grid_->width) + " does not cover " +
                         std::to_string(x_.cols()) + " samples");
    }
}

std::vector<double> column(const Matrix& m, std::size_t j) {
    if (j >= m.cols()) {
        throw BoundsError("column index " + std::to_string(j) + " out of range for " +
                          std::to_string(m.cols()) + " columns");
    }
    std::vector<double> out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) out[i] = m(i, j);
    return out;
}

std::vector<double> column(const NonNegMatrix& m, std::size_t j) { return column(m.values(), j); }

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("cannot multiply " + a.shape_str() + " by " + b.shape_str() +
                         ": inner dimensions differ");
    }
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double* out_row = out.data() + i * out.cols();
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            const double* b_row = b.data() + k * b.cols();
            for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aik * b_row[j];
        }
    }
    return out;
}

NonNegMatrix matmul(const NonNegMatrix& a, const NonNegMatrix& b) {
    return NonNegMatrix(matmul(a.values(), b.values()));
}

Matrix matmul_at_b(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) {
        throw ShapeError("cannot multiply " + a.shape_str() + " transposed by " + b.shape_str() +
                         ": row counts differ");
    }
    Matrix out(a.cols(), b.cols());
    for (std::size_t k = 0; k < a.rows(); ++k) {
        const double* a_row = a.data() + k * a.cols();
        const double* b_row = b.data() + k * b.cols();
        for (std::size_t i = 0; i < a.cols(); ++i) {
            const double aki = a_row[i];
            if (aki == 0.0) continue;
            double* out_row = out.data() + i * out.cols();
            for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aki * b_row[j];
        }
    }
    return out;
}

Matrix matmul_a_bt(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) {
        throw ShapeError("cannot multiply " + a.shape_str() + " by " + b.shape_str() +
                         " transposed: column counts differ");
    }
    Matrix out(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* a_row = a.data() + i * a.cols();
        for (std::size_t j = 0; j < b.rows(); ++j) {
            const double* b_row = b.data() + j * b.cols();
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) acc += a_row[k] * b_row[k];
            out(i, j) = acc;
        }
    }
    return out;
}

double frobenius_sq_diff(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) {
        throw ShapeError("shape mismatch: " + a.shape_str() + " vs " + b.shape_str());
    }
    double acc = 0.0;
    const double* pa = a.data();
    const double* pb = b.data();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = pa[i] - pb[i];
        acc += d * d;
    }
    return acc;
}

double frobenius_sq_diff(const NonNegMatrix& a, const NonNegMatrix& b) {
    return frobenius_sq_diff(a.values(), b.values());
}

}  // namespace binmf
