#pragma once

#include "binmf/kernels.hpp"
#include "binmf/matrix.hpp"

namespace binmf {

/// Input- and feature-space reconstruction errors for one factor pair,
/// computable for any (E, A) regardless of how they were obtained.
struct MetricReport {
    double re = 0.0;
    double re_phi = 0.0;
    std::size_t bands = 0;    // L
    std::size_t samples = 0;  // T
    std::size_t rank = 0;     // N
    KernelSpec kernel;
};

/// RE = sqrt(‖X − EA‖²_F / (T·L)).
double reconstruction_error(const Dataset& x, const NonNegMatrix& e, const NonNegMatrix& a);

/// REᵠ = sqrt(Σ_t ‖Φ(x_t) − Σ_n a_nt Φ(e_n)‖²_H / (T·L)), evaluated through
/// kernel expansions with the same 1/(T·L) normalization as RE.
double reconstruction_error_feature(const Dataset& x, const NonNegMatrix& e,
                                    const NonNegMatrix& a, const KernelSpec& kernel);

MetricReport report(const Dataset& x, const NonNegMatrix& e, const NonNegMatrix& a,
                    const KernelSpec& kernel);

}  // namespace binmf
