#include "binmf/pareto.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <optional>
#include <thread>

#include "binmf/log.hpp"

namespace binmf {

std::vector<double> SweepConfig::default_alpha_grid() {
    std::vector<double> grid;
    grid.reserve(51);
    for (int k = 0; k < 50; ++k) grid.push_back(k * 0.02);
    grid.push_back(1.0);
    return grid;
}

void SweepConfig::validate() const {
    if (alphas.empty()) throw ConfigError("sweep requires a non-empty alpha grid");
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (!(alphas[i] >= 0.0 && alphas[i] <= 1.0)) {
            throw DomainError("alpha grid value " + std::to_string(alphas[i]) +
                              " lies outside [0, 1]");
        }
        if (i > 0 && !(alphas[i] > alphas[i - 1])) {
            throw ConfigError("alpha grid must be strictly increasing");
        }
    }
    if (!seeds.empty() && seeds.size() != 1 && seeds.size() != alphas.size()) {
        throw ConfigError("seed list must be empty, a single shared seed, or one per alpha");
    }
    SolveConfig probe = base;
    probe.alpha = alphas.front();
    probe.validate();
}

std::uint64_t SweepConfig::seed_for(std::size_t index) const {
    if (seeds.empty()) return base.seed;
    if (seeds.size() == 1) return seeds.front();
    return seeds[index];
}

bool dominates(const ObjectiveVector& u, const ObjectiveVector& v) {
    if (u.j_input > v.j_input || u.j_feature > v.j_feature) return false;
    return u.j_input < v.j_input || u.j_feature < v.j_feature;
}

namespace {

// Skyline scan for the exact filter: after sorting by (j_input, j_feature)
// ascending, a point is dominated exactly when an earlier point has
// j_feature strictly below its own, or ties its j_feature with a strictly
// smaller j_input. Identical vectors never dominate each other.
std::vector<bool> dominated_flags_exact(const std::vector<ObjectiveVector>& objectives) {
    const std::size_t n = objectives.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t lhs, std::size_t rhs) {
        if (objectives[lhs].j_input != objectives[rhs].j_input) {
            return objectives[lhs].j_input < objectives[rhs].j_input;
        }
        return objectives[lhs].j_feature < objectives[rhs].j_feature;
    });

    std::vector<bool> dominated(n, false);
    double best_feature = 0.0;
    double best_feature_input = 0.0;
    bool have_best = false;
    for (std::size_t k = 0; k < n; ++k) {
        const ObjectiveVector& v = objectives[order[k]];
        if (have_best) {
            if (best_feature < v.j_feature ||
                (best_feature == v.j_feature && best_feature_input < v.j_input)) {
                dominated[order[k]] = true;
            }
        }
        if (!have_best || v.j_feature < best_feature) {
            best_feature = v.j_feature;
            best_feature_input = v.j_input;
            have_best = true;
        }
    }
    return dominated;
}

// Relaxed variant for plot de-noising: a point also loses to one that is at
// most epsilon worse per objective but better in the aggregate (ties broken
// by list position), which collapses near-duplicate clusters to a single
// representative.
std::vector<bool> dominated_flags_relaxed(const std::vector<ObjectiveVector>& objectives,
                                          double epsilon) {
    const std::size_t n = objectives.size();
    std::vector<bool> dominated(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const ObjectiveVector& u = objectives[j];
            const ObjectiveVector& v = objectives[i];
            if (u.j_input > v.j_input + epsilon || u.j_feature > v.j_feature + epsilon) {
                continue;
            }
            const double sum_u = u.j_input + u.j_feature;
            const double sum_v = v.j_input + v.j_feature;
            if (sum_u < sum_v || (sum_u == sum_v && j < i)) {
                dominated[i] = true;
                break;
            }
        }
    }
    return dominated;
}

}  // namespace

ParetoFront filter_nondominated(std::vector<SolutionRecord> solutions, double epsilon) {
    if (solutions.empty()) throw DomainError("cannot filter an empty solution list");
    std::vector<ObjectiveVector> objectives;
    objectives.reserve(solutions.size());
    for (const SolutionRecord& s : solutions) objectives.push_back(s.objective);
    const std::vector<bool> dominated = epsilon == 0.0
                                            ? dominated_flags_exact(objectives)
                                            : dominated_flags_relaxed(objectives, epsilon);

    ParetoFront front;
    front.all_solutions = std::move(solutions);
    for (std::size_t i = 0; i < dominated.size(); ++i) {
        (dominated[i] ? front.dominated_indices : front.nondominated_indices).push_back(i);
    }
    return front;
}

ParetoFront sweep(const Dataset& x, const SweepConfig& cfg) {
    cfg.validate();
    const std::size_t count = cfg.alphas.size();
    std::vector<std::optional<SolutionRecord>> slots(count);

    unsigned jobs = cfg.jobs == 0 ? std::thread::hardware_concurrency() : cfg.jobs;
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::optional<Error> first_error;

    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count || failed.load()) return;
            SolveConfig sub = cfg.base;
            sub.alpha = cfg.alphas[i];
            sub.seed = cfg.seed_for(i);
            try {
                slots[i] = solve(x, sub);
            } catch (const Error& err) {
                failed.store(true);
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) {
                    first_error.emplace(err.kind(), "sweep aborted at alpha=" +
                                                        std::to_string(sub.alpha) + ": " +
                                                        err.what());
                }
                return;
            } catch (const std::exception& ex) {
                failed.store(true);
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) {
                    first_error.emplace(ErrorKind::numeric,
                                        "sweep aborted at alpha=" + std::to_string(sub.alpha) +
                                            ": " + ex.what());
                }
                return;
            }
        }
    };

    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }
    if (first_error) throw *first_error;

    std::vector<SolutionRecord> solutions;
    solutions.reserve(count);
    for (std::size_t i = 0; i < count; ++i) solutions.push_back(std::move(*slots[i]));

    // Boundary sanity report: with both extremes in the grid one expects the
    // all-input-space run to win on j_input, but a heuristic sub-solver can
    // violate that; worth a note, not an error.
    if (cfg.alphas.front() == 0.0 && cfg.alphas.back() == 1.0) {
        const ObjectiveVector& first = solutions.front().objective;
        const ObjectiveVector& last = solutions.back().objective;
        if (last.j_input > first.j_input) {
            log::info("alpha=1 run ended with higher input-space objective than the alpha=0 run "
                      "(" +
                      std::to_string(last.j_input) + " vs " + std::to_string(first.j_input) +
                      ")");
        }
    }
    return filter_nondominated(std::move(solutions));
}

std::vector<FrontRow> front_export(const ParetoFront& front) {
    std::vector<FrontRow> rows;
    rows.reserve(front.all_solutions.size());
    std::vector<bool> dominated(front.all_solutions.size(), false);
    for (std::size_t i : front.dominated_indices) dominated[i] = true;
    for (std::size_t i = 0; i < front.all_solutions.size(); ++i) {
        const SolutionRecord& s = front.all_solutions[i];
        FrontRow row;
        row.alpha = s.objective.alpha;
        row.j_input = s.objective.j_input;
        row.j_feature = s.objective.j_feature;
        row.j_aggregated = s.objective.j_aggregated;
        const double scale = static_cast<double>(s.a.cols()) * static_cast<double>(s.e.rows());
        row.re = std::sqrt(2.0 * s.objective.j_input / scale);
        row.re_phi = std::sqrt(2.0 * s.objective.j_feature / scale);
        row.dominated = dominated[i];
        row.iterations = s.iterations_run;
        row.stop_reason = s.stop_reason;
        rows.push_back(row);
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const FrontRow& a, const FrontRow& b) { return a.alpha < b.alpha; });
    return rows;
}

void refilter_rows(std::vector<FrontRow>& rows) {
    std::vector<ObjectiveVector> objectives;
    objectives.reserve(rows.size());
    for (const FrontRow& row : rows) {
        objectives.push_back({row.j_input, row.j_feature, row.alpha, row.j_aggregated});
    }
    const std::vector<bool> dominated = dominated_flags_exact(objectives);
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].dominated = dominated[i];
}

std::optional<std::pair<double, double>> conflicting_alpha_interval(
    const std::vector<FrontRow>& rows) {
    std::optional<std::pair<double, double>> interval;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const double d_input = rows[i + 1].j_input - rows[i].j_input;
        const double d_feature = rows[i + 1].j_feature - rows[i].j_feature;
        if (d_input * d_feature < 0.0) {
            if (!interval) {
                interval = {rows[i].alpha, rows[i + 1].alpha};
            } else {
                interval->second = rows[i + 1].alpha;
            }
        }
    }
    return interval;
}

}  // namespace binmf
