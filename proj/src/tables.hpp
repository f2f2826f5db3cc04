#pragma once

// Internal helpers shared by the objective, update and solver translation
// units. Not installed.

#include <cstddef>
#include <span>
#include <vector>

#include "binmf/kernels.hpp"
#include "binmf/matrix.hpp"

namespace binmf::detail {

/// Column-major copy of a row-major matrix so individual columns are
/// contiguous and cheap to hand to the kernel functions.
class Columns {
public:
    explicit Columns(const Matrix& m) : dim_(m.rows()), count_(m.cols()), data_(m.size()) {
        for (std::size_t j = 0; j < count_; ++j) {
            double* dst = data_.data() + j * dim_;
            for (std::size_t i = 0; i < dim_; ++i) dst[i] = m(i, j);
        }
    }
    explicit Columns(const NonNegMatrix& m) : Columns(m.values()) {}

    std::span<const double> col(std::size_t j) const {
        return std::span<const double>(data_.data() + j * dim_, dim_);
    }
    std::size_t count() const noexcept { return count_; }
    std::size_t dim() const noexcept { return dim_; }

private:
    std::size_t dim_;
    std::size_t count_;
    std::vector<double> data_;
};

/// κ(u_i, v_j) for every column pair; result is u.count() × v.count().
inline Matrix kernel_cross(const KernelSpec& spec, const Columns& u, const Columns& v) {
    Matrix out(u.count(), v.count());
    for (std::size_t i = 0; i < u.count(); ++i) {
        for (std::size_t j = 0; j < v.count(); ++j) {
            out(i, j) = kernel_eval(spec, u.col(i), v.col(j));
        }
    }
    return out;
}

/// κ(v_t, v_t) per column.
inline std::vector<double> kernel_self(const KernelSpec& spec, const Columns& v) {
    std::vector<double> out(v.count());
    for (std::size_t t = 0; t < v.count(); ++t) out[t] = kernel_eval(spec, v.col(t), v.col(t));
    return out;
}

}  // namespace binmf::detail
