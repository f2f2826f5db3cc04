#include "binmf/solver.hpp"

#include <cmath>
#include <random>
#include <string>
#include <utility>

#include "binmf/log.hpp"

namespace binmf {

void SolveConfig::validate() const {
    if (rank < 1) throw ConfigError("rank must be at least 1");
    if (max_iter < 1) throw ConfigError("max_iter must be at least 1");
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw DomainError("alpha must lie in [0, 1], got " + std::to_string(alpha));
    }
    if (!(init_scale > 0.0) || !std::isfinite(init_scale)) {
        throw ConfigError("init_scale must be positive and finite");
    }
    rule.validate(kernel);
}

const char* stop_reason_name(StopReason reason) {
    return reason == StopReason::stationary ? "stationary" : "max_iter";
}

StopReason parse_stop_reason(const std::string& name) {
    if (name == "stationary") return StopReason::stationary;
    if (name == "max_iter") return StopReason::max_iter;
    throw ParseError("unknown stop reason '" + name + "'");
}

std::pair<NonNegMatrix, NonNegMatrix> init_factors(std::size_t bands, std::size_t rank,
                                                   std::size_t samples, std::uint64_t seed,
                                                   double scale) {
    if (bands < 1 || rank < 1 || samples < 1) {
        throw ConfigError("factor dimensions must be positive");
    }
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw ConfigError("init scale must be positive and finite");
    }
    std::mt19937_64 rng(seed);
    // ((r >> 11) + 1) spans 1..2^53, so the mapped value lies in (0, 1].
    auto draw = [&rng, scale]() {
        const double unit = static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
        return unit * scale;
    };
    Matrix e(bands, rank);
    for (std::size_t i = 0; i < bands; ++i) {
        for (std::size_t n = 0; n < rank; ++n) e(i, n) = draw();
    }
    Matrix a(rank, samples);
    for (std::size_t n = 0; n < rank; ++n) {
        for (std::size_t t = 0; t < samples; ++t) a(n, t) = draw();
    }
    return {NonNegMatrix(std::move(e)), NonNegMatrix(std::move(a))};
}

SolutionRecord solve(const Dataset& x, const SolveConfig& cfg) {
    cfg.validate();
    auto [e0, a0] = init_factors(x.bands(), cfg.rank, x.samples(), cfg.seed, cfg.init_scale);
    IterationState state{std::move(e0), std::move(a0)};

    SolutionRecord record;
    record.seed = cfg.seed;
    record.trace.reserve(cfg.max_iter + 1);
    record.trace.push_back(
        eval_aggregated(x, state.e, state.a, cfg.kernel, cfg.alpha).j_aggregated);

    bool stopped_stationary = false;
    for (std::size_t iter = 1; iter <= cfg.max_iter; ++iter) {
        IterationState next = coordinate_descent_step(x, state, cfg.kernel, cfg.alpha, cfg.rule);
        const double j_next =
            eval_aggregated(x, next.e, next.a, cfg.kernel, cfg.alpha).j_aggregated;
        record.trace.push_back(j_next);
        if (log::enabled(log::Level::debug)) {
            log::debug("iteration " + std::to_string(iter) + ": J = " + std::to_string(j_next));
        }
        // Stopping rule J(n) <= min(J(n-1), J(n+1)) checked once the lookahead
        // value J(n+1) = j_next exists; on a hit, iterate n (the current
        // `state`) is the answer and the lookahead iterate is discarded.
        if (iter >= 2) {
            const double j_n = record.trace[iter - 1];
            const double j_prev = record.trace[iter - 2];
            if (j_n <= j_prev && j_n <= j_next) {
                record.trace.resize(iter);  // keep J(0) .. J(n)
                record.iterations_run = iter - 1;
                stopped_stationary = true;
                break;
            }
        }
        state = std::move(next);
    }
    if (!stopped_stationary) record.iterations_run = cfg.max_iter;
    record.stop_reason = stopped_stationary ? StopReason::stationary : StopReason::max_iter;
    record.objective = eval_aggregated(x, state.e, state.a, cfg.kernel, cfg.alpha);
    record.e = std::move(state.e);
    record.a = std::move(state.a);
    return record;
}

double kkt_residual(const Dataset& x, const NonNegMatrix& e, const NonNegMatrix& a,
                    const KernelSpec& kernel, double alpha) {
    const Matrix ga = grad_a_full(x, e, a, kernel, alpha);
    const Matrix ge = grad_e_full(x, e, a, kernel, alpha);
    double residual = 0.0;
    for (std::size_t n = 0; n < a.rows(); ++n) {
        for (std::size_t t = 0; t < a.cols(); ++t) {
            residual = std::max(residual, std::abs(std::min(a(n, t), ga(n, t))));
        }
    }
    for (std::size_t i = 0; i < e.rows(); ++i) {
        for (std::size_t n = 0; n < e.cols(); ++n) {
            residual = std::max(residual, std::abs(std::min(e(i, n), ge(i, n))));
        }
    }
    return residual;
}

}  // namespace binmf
