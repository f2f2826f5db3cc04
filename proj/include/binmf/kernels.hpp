#pragma once

#include <span>
#include <string>
#include <vector>

#include "binmf/errors.hpp"

namespace binmf {

enum class KernelFamily { gaussian, polynomial, exponential, sigmoid };

const char* kernel_family_name(KernelFamily family);
KernelFamily parse_kernel_family(const std::string& name);

/// Gaussian bandwidth presets that worked well on the HYDICE Urban and
/// AVIRIS Cuprite scenes. The bandwidth is always an explicit parameter;
/// these are starting points, not defaults.
inline constexpr double kGaussianSigmaPresetUrban = 3.0;
inline constexpr double kGaussianSigmaPresetCuprite = 2.5;

/// Kernel family plus its parameters. Parameters irrelevant to the chosen
/// family are ignored.
///
///   gaussian     κ(e,z) = exp(−‖e−z‖² / (2σ²))
///   polynomial   κ(e,z) = (zᵀe + c)^d
///   exponential  κ(e,z) = exp(−‖e−z‖₁ / (2σ²))
///   sigmoid      κ(e,z) = tanh(γ zᵀe + c)
///
/// The exponential kernel uses the 1-norm so that its gradient is the
/// elementwise sign form −κ(e,z)·sgn(e−z)/(2σ²); sgn(0) is taken as 0.
struct KernelSpec {
    KernelFamily family = KernelFamily::gaussian;
    double sigma = 0.0;  // gaussian, exponential bandwidth (> 0)
    double c = 0.0;      // polynomial, sigmoid offset
    int degree = 0;      // polynomial degree (>= 1)
    double gamma = 0.0;  // sigmoid scale

    static KernelSpec gaussian(double sigma);
    static KernelSpec polynomial(double c, int degree);
    static KernelSpec exponential(double sigma);
    static KernelSpec sigmoid(double gamma, double c);

    void validate() const;
    bool is_gaussian() const noexcept { return family == KernelFamily::gaussian; }
};

/// κ(e, z). Throws ShapeError on length mismatch and NumericError (naming
/// the family) if the value is not finite.
double kernel_eval(const KernelSpec& spec, std::span<const double> e, std::span<const double> z);

/// ∇ₑ κ(e, z), the analytic gradient with respect to the first argument.
std::vector<double> kernel_grad(const KernelSpec& spec, std::span<const double> e,
                                std::span<const double> z);

}  // namespace binmf
