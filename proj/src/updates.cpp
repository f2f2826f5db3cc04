#include "binmf/updates.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "binmf/log.hpp"
#include "binmf/objectives.hpp"
#include "tables.hpp"

namespace binmf {

namespace {

void check_factor_shapes(const Dataset& x, const NonNegMatrix& e, const NonNegMatrix& a) {
    if (e.rows() != x.bands() || a.rows() != e.cols() || a.cols() != x.samples()) {
        throw ShapeError("factor shapes " + e.shape_str() + " / " + a.shape_str() +
                         " do not match dataset " + x.x().shape_str());
    }
}

void check_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw DomainError("alpha must lie in [0, 1], got " + std::to_string(alpha));
    }
}

void require_gaussian(const KernelSpec& kernel) {
    if (!kernel.is_gaussian()) {
        throw ConfigError(std::string("multiplicative updates are derived for the gaussian "
                                      "kernel; got ") +
                          kernel_family_name(kernel.family) + " (use additive mode)");
    }
}

struct StallCounter {
    std::size_t count = 0;
    std::size_t first_row = 0;
    std::size_t first_col = 0;

    void record(std::size_t r, std::size_t c) {
        if (count == 0) {
            first_row = r;
            first_col = c;
        }
        ++count;
    }
    void report(const char* what) const {
        if (count == 0) return;
        log::warn(std::string(what) + ": " + std::to_string(count) +
                  " stalled entries (denominator below epsilon with nonzero numerator) left "
                  "unchanged; first at (" +
                  std::to_string(first_row) + ", " + std::to_string(first_col) + ")");
    }
};

// Quotient update with the denominator guard: entries whose denominator is
// below eps keep their old value, so exact fixed points stay fixed and an
// inactive component is never divided by zero.
double guarded_quotient(double old_value, double num, double den, double eps, std::size_t r,
                        std::size_t c, StallCounter& stalls) {
    if (den < eps) {
        if (num > eps) stalls.record(r, c);
        return old_value;
    }
    return old_value * num / den;
}

}  // namespace

const char* update_mode_name(UpdateMode mode) {
    return mode == UpdateMode::multiplicative ? "multiplicative" : "additive";
}

UpdateMode parse_update_mode(const std::string& name) {
    if (name == "multiplicative") return UpdateMode::multiplicative;
    if (name == "additive") return UpdateMode::additive;
    throw ConfigError("unknown update mode '" + name + "'");
}

void UpdateRule::validate(const KernelSpec& kernel) const {
    kernel.validate();
    if (mode == UpdateMode::multiplicative) require_gaussian(kernel);
    if (!(epsilon > 0.0)) {
        throw ConfigError("update epsilon must be positive, got " + std::to_string(epsilon));
    }
    if (!(step_a > 0.0) || !(step_e > 0.0)) {
        throw ConfigError("additive step sizes must be positive");
    }
}

NonNegMatrix update_a_multiplicative(const Dataset& x, const NonNegMatrix& e,
                                     const NonNegMatrix& a, const KernelSpec& kernel,
                                     double alpha, double eps) {
    check_factor_shapes(x, e, a);
    check_alpha(alpha);
    require_gaussian(kernel);
    const std::size_t rank = a.rows();
    const std::size_t samples = a.cols();

    Matrix num(rank, samples);
    Matrix den(rank, samples);
    if (alpha > 0.0) {
        const Matrix g_ex = matmul_at_b(e.values(), x.x().values());
        const Matrix g_ee = matmul_at_b(e.values(), e.values());
        const Matrix mix = matmul(g_ee, a.values());
        for (std::size_t n = 0; n < rank; ++n) {
            for (std::size_t t = 0; t < samples; ++t) {
                num(n, t) += alpha * g_ex(n, t);
                den(n, t) += alpha * mix(n, t);
            }
        }
    }
    if (alpha < 1.0) {
        const detail::Columns ec(e);
        const detail::Columns xc(x.x());
        const Matrix k_ex = detail::kernel_cross(kernel, ec, xc);
        const Matrix k_ee = detail::kernel_cross(kernel, ec, ec);
        const Matrix mix = matmul(k_ee, a.values());
        for (std::size_t n = 0; n < rank; ++n) {
            for (std::size_t t = 0; t < samples; ++t) {
                num(n, t) += (1.0 - alpha) * k_ex(n, t);
                den(n, t) += (1.0 - alpha) * mix(n, t);
            }
        }
    }

    Matrix out(rank, samples);
    StallCounter stalls;
    for (std::size_t n = 0; n < rank; ++n) {
        for (std::size_t t = 0; t < samples; ++t) {
            out(n, t) = guarded_quotient(a(n, t), num(n, t), den(n, t), eps, n, t, stalls);
        }
    }
    stalls.report("abundance update");
    return NonNegMatrix(std::move(out));
}

NonNegMatrix update_e_multiplicative(const Dataset& x, const NonNegMatrix& e,
                                     const NonNegMatrix& a, const KernelSpec& kernel,
                                     double alpha, double eps) {
    check_factor_shapes(x, e, a);
    check_alpha(alpha);
    require_gaussian(kernel);
    const std::size_t bands = x.bands();
    const std::size_t rank = e.cols();
    const double sigma_sq = kernel.sigma * kernel.sigma;

    const Matrix aat = matmul_a_bt(a.values(), a.values());  // N×N, symmetric

    Matrix num(bands, rank);
    Matrix den(bands, rank);
    if (alpha > 0.0) {
        const Matrix xat = matmul_a_bt(x.x().values(), a.values());  // Σ_t a_nt x_t per column
        const Matrix eaat = matmul(e.values(), aat);                 // Σ_m (Σ_t a_nt a_mt) e_m
        const double w = alpha * sigma_sq;
        for (std::size_t i = 0; i < bands; ++i) {
            for (std::size_t n = 0; n < rank; ++n) {
                num(i, n) += w * xat(i, n);
                den(i, n) += w * eaat(i, n);
            }
        }
    }
    if (alpha < 1.0) {
        const detail::Columns ec(e);
        const detail::Columns xc(x.x());
        const Matrix k_ex = detail::kernel_cross(kernel, ec, xc);  // N×T
        const Matrix k_ee = detail::kernel_cross(kernel, ec, ec);  // N×N

        // Σ_t a_nt κ(e_n,x_t) x_t per column, via the weighted abundances.
        Matrix weighted(a.rows(), a.cols());
        for (std::size_t n = 0; n < rank; ++n) {
            for (std::size_t t = 0; t < a.cols(); ++t) weighted(n, t) = a(n, t) * k_ex(n, t);
        }
        const Matrix xw = matmul_a_bt(x.x().values(), weighted);  // L×N

        // Σ_m a_mt κ(e_n,e_m) summed against abundances and endmembers.
        Matrix mixed(rank, rank);  // κ(e_n,e_m) · Σ_t a_nt a_mt
        for (std::size_t n = 0; n < rank; ++n) {
            for (std::size_t m = 0; m < rank; ++m) mixed(n, m) = k_ee(n, m) * aat(n, m);
        }
        const Matrix emixed = matmul(e.values(), mixed);  // column n: Σ_m mixed(n,m) e_m

        const double w = 1.0 - alpha;
        for (std::size_t n = 0; n < rank; ++n) {
            double cross_sum = 0.0;  // Σ_t a_nt κ(e_n,x_t)
            for (std::size_t t = 0; t < a.cols(); ++t) cross_sum += weighted(n, t);
            double self_sum = 0.0;  // Σ_t a_nt Σ_m a_mt κ(e_n,e_m)
            for (std::size_t m = 0; m < rank; ++m) self_sum += mixed(n, m);
            for (std::size_t i = 0; i < bands; ++i) {
                num(i, n) += w * (xw(i, n) + self_sum * e(i, n));
                den(i, n) += w * (cross_sum * e(i, n) + emixed(i, n));
            }
        }
    }

    Matrix out(bands, rank);
    StallCounter stalls;
    for (std::size_t i = 0; i < bands; ++i) {
        for (std::size_t n = 0; n < rank; ++n) {
            out(i, n) = guarded_quotient(e(i, n), num(i, n), den(i, n), eps, i, n, stalls);
        }
    }
    stalls.report("endmember update");
    return NonNegMatrix(std::move(out));
}

IterationState update_additive(const Dataset& x, const NonNegMatrix& e, const NonNegMatrix& a,
                               const KernelSpec& kernel, double alpha, const UpdateRule& rule) {
    check_factor_shapes(x, e, a);
    check_alpha(alpha);
    kernel.validate();

    const Matrix grad_a_mat = grad_a_full(x, e, a, kernel, alpha);
    Matrix new_a(a.rows(), a.cols());
    for (std::size_t n = 0; n < a.rows(); ++n) {
        for (std::size_t t = 0; t < a.cols(); ++t) {
            const double g = grad_a_mat(n, t);
            if (!std::isfinite(g)) {
                throw NumericError("non-finite abundance gradient at (" + std::to_string(n) +
                                   ", " + std::to_string(t) + ")");
            }
            new_a(n, t) = std::max(a(n, t) - rule.step_a * g, 0.0);
        }
    }
    NonNegMatrix a_next(std::move(new_a));

    const Matrix grad_e_mat = grad_e_full(x, e, a_next, kernel, alpha);
    Matrix new_e(e.rows(), e.cols());
    for (std::size_t i = 0; i < e.rows(); ++i) {
        for (std::size_t n = 0; n < e.cols(); ++n) {
            new_e(i, n) = std::max(e(i, n) - rule.step_e * grad_e_mat(i, n), 0.0);
        }
    }
    return IterationState{NonNegMatrix(std::move(new_e)), std::move(a_next)};
}

IterationState coordinate_descent_step(const Dataset& x, IterationState state,
                                       const KernelSpec& kernel, double alpha,
                                       const UpdateRule& rule) {
    rule.validate(kernel);
    check_alpha(alpha);
    if (rule.mode == UpdateMode::additive) {
        return update_additive(x, state.e, state.a, kernel, alpha, rule);
    }
    NonNegMatrix a_next =
        update_a_multiplicative(x, state.e, state.a, kernel, alpha, rule.epsilon);
    NonNegMatrix e_next =
        update_e_multiplicative(x, state.e, a_next, kernel, alpha, rule.epsilon);
    return IterationState{std::move(e_next), std::move(a_next)};
}

}  // namespace binmf
