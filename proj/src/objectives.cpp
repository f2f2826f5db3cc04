#include "binmf/objectives.hpp"

#include <cmath>
#include <string>

#include "tables.hpp"

namespace binmf {

namespace {

// Negative feature-space residuals up to this magnitude are treated as
// roundoff and clamped to zero; anything larger is a kernel bug.
constexpr double kResidualClampTol = 1e-12;

void check_factor_shapes(const Dataset& x, const NonNegMatrix& e, const NonNegMatrix& a) {
    if (e.rows() != x.bands()) {
        throw ShapeError("endmember matrix is " + e.shape_str() + " but the dataset has " +
                         std::to_string(x.bands()) + " bands");
    }
    if (a.rows() != e.cols() || a.cols() != x.samples()) {
        throw ShapeError("abundance matrix is " + a.shape_str() + ", expected " +
                         std::to_string(e.cols()) + "x" + std::to_string(x.samples()));
    }
}

void check_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw DomainError("alpha must lie in [0, 1], got " + std::to_string(alpha));
    }
}

double feature_term(const Matrix& k_ee, const Matrix& k_ex, const std::vector<double>& k_xx,
                    const NonNegMatrix& a, std::size_t t) {
    const std::size_t n_rank = a.rows();
    double quad = 0.0;
    for (std::size_t n = 0; n < n_rank; ++n) {
        const double ant = a(n, t);
        if (ant == 0.0) continue;
        double inner = 0.0;
        for (std::size_t m = 0; m < n_rank; ++m) inner += a(m, t) * k_ee(n, m);
        quad += ant * inner;
    }
    double cross = 0.0;
    for (std::size_t n = 0; n < n_rank; ++n) cross += a(n, t) * k_ex(n, t);
    double term = quad - 2.0 * cross + k_xx[t];
    if (term < 0.0) {
        if (term < -kResidualClampTol) {
            throw NumericError("feature-space residual " + std::to_string(term) + " at sample " +
                               std::to_string(t) + " is negative beyond roundoff");
        }
        term = 0.0;
    }
    return term;
}

}  // namespace

double eval_j_input(const Dataset& x, const NonNegMatrix& e, const NonNegMatrix& a) {
    check_factor_shapes(x, e, a);
    const Matrix ea = matmul(e.values(), a.values());
    const Matrix& xm = x.x().values();
    double acc = 0.0;
    for (std::size_t t = 0; t < x.samples(); ++t) {
        for (std::size_t i = 0; i < x.bands(); ++i) {
            const double d = xm(i, t) - ea(i, t);
            acc += d * d;
        }
    }
    return 0.5 * acc;
}

double eval_j_feature(const Dataset& x, const NonNegMatrix& e, const NonNegMatrix& a,
                      const KernelSpec& kernel) {
    check_factor_shapes(x, e, a);
    kernel.validate();
    const detail::Columns ec(e);
    const detail::Columns xc(x.x());
    const Matrix k_ee = detail::kernel_cross(kernel, ec, ec);
    const Matrix k_ex = detail::kernel_cross(kernel, ec, xc);
    const std::vector<double> k_xx = detail::kernel_self(kernel, xc);
    double acc = 0.0;
    for (std::size_t t = 0; t < x.samples(); ++t) acc += feature_term(k_ee, k_ex, k_xx, a, t);
    return 0.5 * acc;
}

ObjectiveVector eval_aggregated(const Dataset& x, const NonNegMatrix& e, const NonNegMatrix& a,
                                const KernelSpec& kernel, double alpha) {
    check_alpha(alpha);
    ObjectiveVector out;
    out.alpha = alpha;
    out.j_input = eval_j_input(x, e, a);
    out.j_feature = eval_j_feature(x, e, a, kernel);
    out.j_aggregated = alpha * out.j_input + (1.0 - alpha) * out.j_feature;
    return out;
}

double grad_a(const Dataset& x, const NonNegMatrix& e, const NonNegMatrix& a,
              const KernelSpec& kernel, double alpha, std::size_t n, std::size_t t) {
    check_factor_shapes(x, e, a);
    check_alpha(alpha);
    kernel.validate();
    if (n >= a.rows() || t >= a.cols()) {
        throw BoundsError("gradient index (" + std::to_string(n) + ", " + std::to_string(t) +
                          ") out of range for " + a.shape_str() + " abundances");
    }
    const detail::Columns ec(e);
    const std::vector<double> xt = column(x.x(), t);
    const auto en = ec.col(n);

    double linear = 0.0;
    {
        double dot_ex = 0.0;
        for (std::size_t i = 0; i < en.size(); ++i) dot_ex += en[i] * xt[i];
        double mix = 0.0;
        for (std::size_t m = 0; m < e.cols(); ++m) {
            const auto em = ec.col(m);
            double dot_ee = 0.0;
            for (std::size_t i = 0; i < en.size(); ++i) dot_ee += en[i] * em[i];
            mix += a(m, t) * dot_ee;
        }
        linear = -dot_ex + mix;
    }
    double feature = 0.0;
    {
        double mix = 0.0;
        for (std::size_t m = 0; m < e.cols(); ++m) {
            mix += a(m, t) * kernel_eval(kernel, en, ec.col(m));
        }
        feature = -kernel_eval(kernel, en, xt) + mix;
    }
    return alpha * linear + (1.0 - alpha) * feature;
}

std::vector<double> grad_e(const Dataset& x, const NonNegMatrix& e, const NonNegMatrix& a,
                           const KernelSpec& kernel, double alpha, std::size_t n) {
    check_factor_shapes(x, e, a);
    check_alpha(alpha);
    kernel.validate();
    if (n >= e.cols()) {
        throw BoundsError("endmember index " + std::to_string(n) + " out of range for " +
                          std::to_string(e.cols()) + " columns");
    }
    const std::size_t bands = x.bands();
    const std::size_t rank = e.cols();
    const detail::Columns ec(e);
    const detail::Columns xc(x.x());
    const auto en = ec.col(n);
    const Matrix ea = matmul(e.values(), a.values());

    // Kernel gradients against the other endmembers do not depend on t.
    std::vector<std::vector<double>> grads_ee(rank);
    for (std::size_t m = 0; m < rank; ++m) grads_ee[m] = kernel_grad(kernel, en, ec.col(m));

    std::vector<double> out(bands, 0.0);
    std::vector<double> kpart(bands);
    for (std::size_t t = 0; t < x.samples(); ++t) {
        const double ant = a(n, t);
        if (ant == 0.0) continue;
        const std::vector<double> grad_x = kernel_grad(kernel, en, xc.col(t));
        for (std::size_t i = 0; i < bands; ++i) kpart[i] = -grad_x[i];
        for (std::size_t m = 0; m < rank; ++m) {
            const double amt = a(m, t);
            if (amt == 0.0) continue;
            const auto& g = grads_ee[m];
            for (std::size_t i = 0; i < bands; ++i) kpart[i] += amt * g[i];
        }
        const auto xt = xc.col(t);
        for (std::size_t i = 0; i < bands; ++i) {
            out[i] += ant * (alpha * (ea(i, t) - xt[i]) + (1.0 - alpha) * kpart[i]);
        }
    }
    for (double v : out) {
        if (!std::isfinite(v)) {
            throw NumericError("gradient with respect to endmember " + std::to_string(n) +
                               " is not finite");
        }
    }
    return out;
}

std::vector<double> grad_e_gaussian(const Dataset& x, const NonNegMatrix& e,
                                    const NonNegMatrix& a, const KernelSpec& kernel, double alpha,
                                    std::size_t n) {
    if (!kernel.is_gaussian()) {
        throw ConfigError("the closed-form endmember gradient is derived for the gaussian "
                          "kernel only");
    }
    check_factor_shapes(x, e, a);
    check_alpha(alpha);
    kernel.validate();
    if (n >= e.cols()) {
        throw BoundsError("endmember index " + std::to_string(n) + " out of range for " +
                          std::to_string(e.cols()) + " columns");
    }
    const std::size_t bands = x.bands();
    const std::size_t rank = e.cols();
    const detail::Columns ec(e);
    const detail::Columns xc(x.x());
    const auto en = ec.col(n);
    const Matrix ea = matmul(e.values(), a.values());
    const double sigma_sq = kernel.sigma * kernel.sigma;

    // −κ(e_n,e_m)/σ² per endmember; the t-independent part of the kernel sum.
    std::vector<double> scale_em(rank);
    for (std::size_t m = 0; m < rank; ++m) {
        scale_em[m] = -kernel_eval(kernel, en, ec.col(m)) / sigma_sq;
    }

    std::vector<double> out(bands, 0.0);
    std::vector<double> kpart(bands);
    for (std::size_t t = 0; t < x.samples(); ++t) {
        const double ant = a(n, t);
        if (ant == 0.0) continue;
        const auto xt = xc.col(t);
        const double scale_x = -kernel_eval(kernel, en, xt) / sigma_sq;
        for (std::size_t i = 0; i < bands; ++i) kpart[i] = -(scale_x * (en[i] - xt[i]));
        for (std::size_t m = 0; m < rank; ++m) {
            const double amt = a(m, t);
            if (amt == 0.0) continue;
            const auto em = ec.col(m);
            for (std::size_t i = 0; i < bands; ++i) {
                kpart[i] += amt * (scale_em[m] * (en[i] - em[i]));
            }
        }
        for (std::size_t i = 0; i < bands; ++i) {
            out[i] += ant * (alpha * (ea(i, t) - xt[i]) + (1.0 - alpha) * kpart[i]);
        }
    }
    return out;
}

Matrix grad_a_full(const Dataset& x, const NonNegMatrix& e, const NonNegMatrix& a,
                   const KernelSpec& kernel, double alpha) {
    check_factor_shapes(x, e, a);
    check_alpha(alpha);
    kernel.validate();
    const std::size_t rank = a.rows();
    const std::size_t samples = a.cols();
    Matrix out(rank, samples);
    if (alpha > 0.0) {
        const Matrix g_ee = matmul_at_b(e.values(), e.values());
        const Matrix g_ex = matmul_at_b(e.values(), x.x().values());
        const Matrix mix = matmul(g_ee, a.values());
        for (std::size_t n = 0; n < rank; ++n) {
            for (std::size_t t = 0; t < samples; ++t) {
                out(n, t) += alpha * (mix(n, t) - g_ex(n, t));
            }
        }
    }
    if (alpha < 1.0) {
        const detail::Columns ec(e);
        const detail::Columns xc(x.x());
        const Matrix k_ee = detail::kernel_cross(kernel, ec, ec);
        const Matrix k_ex = detail::kernel_cross(kernel, ec, xc);
        const Matrix mix = matmul(k_ee, a.values());
        for (std::size_t n = 0; n < rank; ++n) {
            for (std::size_t t = 0; t < samples; ++t) {
                out(n, t) += (1.0 - alpha) * (mix(n, t) - k_ex(n, t));
            }
        }
    }
    return out;
}

Matrix grad_e_full(const Dataset& x, const NonNegMatrix& e, const NonNegMatrix& a,
                   const KernelSpec& kernel, double alpha) {
    Matrix out(x.bands(), e.cols());
    for (std::size_t n = 0; n < e.cols(); ++n) {
        const std::vector<double> g = grad_e(x, e, a, kernel, alpha, n);
        for (std::size_t i = 0; i < x.bands(); ++i) out(i, n) = g[i];
    }
    return out;
}

}  // namespace binmf
