#pragma once

#include "binmf/kernels.hpp"
#include "binmf/matrix.hpp"

namespace binmf {

enum class UpdateMode { multiplicative, additive };

const char* update_mode_name(UpdateMode mode);
UpdateMode parse_update_mode(const std::string& name);

/// How one block update is carried out. Multiplicative mode follows the
/// split-gradient quotient rules and is only valid with the gaussian kernel;
/// additive mode is a fixed-step projected gradient step for any kernel.
struct UpdateRule {
    UpdateMode mode = UpdateMode::multiplicative;
    double step_a = 1e-3;     // additive step size for A entries
    double step_e = 1e-3;     // additive step size for E columns
    double epsilon = 1e-12;   // multiplicative denominator guard

    void validate(const KernelSpec& kernel) const;
};

/// Factor pair carried between iterations.
struct IterationState {
    NonNegMatrix e;  // L×N endmembers
    NonNegMatrix a;  // N×T abundances
};

/// One multiplicative sweep over every a_nt:
///   a_nt ← a_nt · (α e_nᵀx_t + (1−α) κ(e_n,x_t))
///               / (α Σ_m a_mt e_nᵀe_m + (1−α) Σ_m a_mt κ(e_n,e_m))
/// All reads come from the pre-sweep matrices. Entries whose denominator
/// falls below eps are left unchanged (with a warning when the numerator is
/// nonzero). Gaussian kernel only.
NonNegMatrix update_a_multiplicative(const Dataset& x, const NonNegMatrix& e,
                                     const NonNegMatrix& a, const KernelSpec& kernel,
                                     double alpha, double eps);

/// One multiplicative sweep over every endmember column (division and
/// multiplication elementwise):
///   e_n ← e_n ⊗ [α σ² Σ_t a_nt x_t
///                 + (1−α) Σ_t a_nt (κ(e_n,x_t) x_t + Σ_m a_mt κ(e_n,e_m) e_n)]
///             ⊘ [α σ² Σ_t a_nt Σ_m a_mt e_m
///                 + (1−α) Σ_t a_nt (κ(e_n,x_t) e_n + Σ_m a_mt κ(e_n,e_m) e_m)]
/// Kernel values are taken from the pre-sweep E throughout. Gaussian only.
NonNegMatrix update_e_multiplicative(const Dataset& x, const NonNegMatrix& e,
                                     const NonNegMatrix& a, const KernelSpec& kernel,
                                     double alpha, double eps);

/// One projected gradient step on A (holding E), then one on E (holding the
/// new A), both followed by rectification at zero. Any kernel family.
IterationState update_additive(const Dataset& x, const NonNegMatrix& e, const NonNegMatrix& a,
                               const KernelSpec& kernel, double alpha, const UpdateRule& rule);

/// One full outer iteration of the two-block coordinate descent: update all
/// of A holding E, then all of E holding the new A.
IterationState coordinate_descent_step(const Dataset& x, IterationState state,
                                       const KernelSpec& kernel, double alpha,
                                       const UpdateRule& rule);

}  // namespace binmf
