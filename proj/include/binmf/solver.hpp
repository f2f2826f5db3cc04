#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "binmf/kernels.hpp"
#include "binmf/matrix.hpp"
#include "binmf/objectives.hpp"
#include "binmf/updates.hpp"

namespace binmf {

/// Everything a single sub-optimization run needs.
struct SolveConfig {
    std::size_t rank = 1;       // N
    double alpha = 1.0;         // weight in [0, 1]
    KernelSpec kernel;          // feature-space kernel (used at every alpha)
    UpdateRule rule;            // update mode and its parameters
    std::size_t max_iter = 300;
    std::uint64_t seed = 0;
    double init_scale = 1.0;    // initial entries drawn uniformly from (0, scale]

    void validate() const;
};

enum class StopReason { stationary, max_iter };

const char* stop_reason_name(StopReason reason);
StopReason parse_stop_reason(const std::string& name);

/// Result of one run: factors, the objective vector evaluated on them, the
/// per-iteration aggregated-objective trace (trace[0] is the initial value,
/// so trace.size() == iterations_run + 1), and why the run stopped.
struct SolutionRecord {
    NonNegMatrix e;
    NonNegMatrix a;
    ObjectiveVector objective;
    std::size_t iterations_run = 0;
    std::vector<double> trace;
    StopReason stop_reason = StopReason::max_iter;
    std::uint64_t seed = 0;
};

/// Strictly positive uniform initial factors, reproducible across platforms:
/// entries are drawn from a std::mt19937_64 seeded with `seed`, each 64-bit
/// draw mapped to (0, 1] via ((r >> 11) + 1) · 2⁻⁵³ and scaled. Draw order is
/// part of the contract: E first in row-major order, then A in row-major
/// order.
std::pair<NonNegMatrix, NonNegMatrix> init_factors(std::size_t bands, std::size_t rank,
                                                   std::size_t samples, std::uint64_t seed,
                                                   double scale);

/// Runs the two-block coordinate descent until the two-fold stopping rule
/// fires: the run halts at iteration n when J(n) ≤ min(J(n−1), J(n+1)) —
/// detected by computing the lookahead iterate and reverting to iterate n —
/// or when n reaches max_iter. The returned objective is evaluated on the
/// returned factors.
SolutionRecord solve(const Dataset& x, const SolveConfig& cfg);

/// Complementarity residual max|min(value, gradient)| over every entry of E
/// and A; zero exactly at a KKT point of the nonnegativity-constrained
/// problem.
double kkt_residual(const Dataset& x, const NonNegMatrix& e, const NonNegMatrix& a,
                    const KernelSpec& kernel, double alpha);

}  // namespace binmf
