#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "binmf/solver.hpp"

namespace binmf {

/// Weight-grid sweep configuration. The per-point solves reuse `base` with
/// the alpha overridden; seeds holds either one shared seed (default: the
/// base seed, so the front reflects alpha alone) or one seed per grid point.
struct SweepConfig {
    std::vector<double> alphas = default_alpha_grid();
    SolveConfig base;
    std::vector<std::uint64_t> seeds;  // empty → base.seed everywhere
    unsigned jobs = 0;                 // 0 → hardware concurrency

    /// {0, 0.02, ..., 0.98, 1}: 51 evenly spaced weights.
    static std::vector<double> default_alpha_grid();
    void validate() const;
    std::uint64_t seed_for(std::size_t index) const;
};

/// All sweep solutions in grid order plus the dominance partition:
/// nondominated_indices and dominated_indices split [0, n) and each keeps
/// the input order.
struct ParetoFront {
    std::vector<SolutionRecord> all_solutions;
    std::vector<std::size_t> nondominated_indices;
    std::vector<std::size_t> dominated_indices;
};

/// u dominates v iff u.j_input ≤ v.j_input and u.j_feature ≤ v.j_feature
/// with at least one strict inequality. Comparisons are exact.
bool dominates(const ObjectiveVector& u, const ObjectiveVector& v);

/// Dominance partition of the solution list. Identical objective vectors are
/// all retained as nondominated. The optional epsilon relaxes the comparison
/// (u dominates v within epsilon slack) for plot de-noising only; the
/// canonical filter keeps it at zero.
ParetoFront filter_nondominated(std::vector<SolutionRecord> solutions, double epsilon = 0.0);

/// Runs one solve per grid point (concurrently up to cfg.jobs workers),
/// assembles the records in grid order and filters. Deterministic for a
/// given configuration regardless of the worker count.
ParetoFront sweep(const Dataset& x, const SweepConfig& cfg);

/// One export row per solution, sorted by alpha ascending. The
/// reconstruction errors are derived from the stored objectives through
/// RE = sqrt(2 J_X / (T·L)) and REᵠ = sqrt(2 J_H / (T·L)).
struct FrontRow {
    double alpha = 0.0;
    double j_input = 0.0;
    double j_feature = 0.0;
    double j_aggregated = 0.0;
    double re = 0.0;
    double re_phi = 0.0;
    bool dominated = false;
    std::size_t iterations = 0;
    StopReason stop_reason = StopReason::max_iter;
};

std::vector<FrontRow> front_export(const ParetoFront& front);

/// Recomputes the dominated flags of exported rows in place from their
/// (j_input, j_feature) pairs; used when merging fronts from several runs.
void refilter_rows(std::vector<FrontRow>& rows);

/// Alpha range over which consecutive grid solutions move the two objectives
/// in opposite directions. Purely descriptive.
std::optional<std::pair<double, double>> conflicting_alpha_interval(
    const std::vector<FrontRow>& rows);

}  // namespace binmf
