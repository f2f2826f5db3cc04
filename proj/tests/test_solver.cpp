#include "doctest.h"

#include <cmath>
#include <cstring>
#include <random>

#include "binmf/solver.hpp"
#include "support/oracles.hpp"
#include "support/random_instances.hpp"

using namespace binmf;

namespace {

SolveConfig gaussian_config(std::size_t rank, double alpha, std::uint64_t seed,
                            std::size_t max_iter = 300) {
    SolveConfig cfg;
    cfg.rank = rank;
    cfg.alpha = alpha;
    cfg.kernel = KernelSpec::gaussian(1.0);
    cfg.max_iter = max_iter;
    cfg.seed = seed;
    return cfg;
}

bool bitwise_equal(const NonNegMatrix& u, const NonNegMatrix& v) {
    return u.rows() == v.rows() && u.cols() == v.cols() &&
           std::memcmp(u.data(), v.data(), u.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("init_factors is deterministic and strictly positive") {
    const auto [e1, a1] = init_factors(4, 2, 6, 123, 1.0);
    const auto [e2, a2] = init_factors(4, 2, 6, 123, 1.0);
    CHECK(bitwise_equal(e1, e2));
    CHECK(bitwise_equal(a1, a2));

    const auto [e3, a3] = init_factors(4, 2, 6, 124, 1.0);
    CHECK_FALSE(bitwise_equal(e1, e3));
    CHECK_FALSE(bitwise_equal(a1, a3));

    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto [e, a] = init_factors(3, 2, 2, seed, 0.5);
        for (std::size_t i = 0; i < e.size(); ++i) {
            CHECK(e.data()[i] > 0.0);
            CHECK(e.data()[i] <= 0.5);
        }
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.data()[i] > 0.0);
    }
}

TEST_CASE("init_factors draw order and value mapping are pinned") {
    // E first in row-major order, then A, each 64-bit draw mapped through
    // ((r >> 11) + 1) * 2^-53.
    const std::uint64_t seed = 987654321;
    const auto [e, a] = init_factors(2, 2, 3, seed, 2.0);
    std::mt19937_64 rng(seed);
    auto draw = [&rng]() { return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53 * 2.0; };
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t n = 0; n < 2; ++n) CHECK(e(i, n) == draw());
    }
    for (std::size_t n = 0; n < 2; ++n) {
        for (std::size_t t = 0; t < 3; ++t) CHECK(a(n, t) == draw());
    }
}

TEST_CASE("planted fixed point stops as stationary within two iterations") {
    const std::uint64_t seed = 42;
    const auto [e0, a0] = init_factors(5, 2, 8, seed, 1.0);
    const Dataset x(matmul(e0, a0));
    const SolveConfig cfg = gaussian_config(2, 1.0, seed);
    const SolutionRecord record = solve(x, cfg);
    CHECK(record.stop_reason == StopReason::stationary);
    CHECK(record.iterations_run <= 2);
    CHECK(record.objective.j_input <= 1e-20);
}

TEST_CASE("solve descends on a random low-rank instance at alpha=1") {
    const NonNegMatrix e_true = testsupport::random_nonneg(10, 2, 800);
    const NonNegMatrix a_true = testsupport::random_nonneg(2, 20, 801);
    const Dataset x(matmul(e_true, a_true));
    const SolveConfig cfg = gaussian_config(2, 1.0, 7, 100);
    const SolutionRecord record = solve(x, cfg);
    CHECK(record.objective.j_input < record.trace.front());
    CHECK(record.trace.back() == record.objective.j_aggregated);
}

TEST_CASE("max_iter=1 runs exactly one iteration") {
    const Dataset x = testsupport::random_dataset(4, 6, 810);
    const SolveConfig cfg = gaussian_config(2, 0.5, 5, 1);
    const SolutionRecord record = solve(x, cfg);
    CHECK(record.iterations_run == 1);
    CHECK(record.stop_reason == StopReason::max_iter);
    CHECK(record.trace.size() == 2);
}

TEST_CASE("trace length always equals iterations_run + 1") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const Dataset x = testsupport::random_dataset(5, 8, 820 + seed);
        const SolveConfig cfg = gaussian_config(2, 0.3, seed, 40);
        const SolutionRecord record = solve(x, cfg);
        CHECK(record.trace.size() == record.iterations_run + 1);
        CHECK(record.trace.back() == record.objective.j_aggregated);
        CHECK(record.seed == seed);
    }
}

TEST_CASE("solve is bitwise deterministic") {
    const Dataset x = testsupport::random_dataset(6, 9, 830);
    const SolveConfig cfg = gaussian_config(3, 0.42, 11, 25);
    const SolutionRecord r1 = solve(x, cfg);
    const SolutionRecord r2 = solve(x, cfg);
    CHECK(bitwise_equal(r1.e, r2.e));
    CHECK(bitwise_equal(r1.a, r2.a));
    CHECK(r1.trace == r2.trace);
    CHECK(r1.objective.j_aggregated == r2.objective.j_aggregated);
    CHECK(r1.iterations_run == r2.iterations_run);
}

TEST_CASE("solve rejects multiplicative mode with a non-gaussian kernel") {
    const Dataset x = testsupport::random_dataset(3, 4, 840);
    SolveConfig cfg = gaussian_config(1, 0.5, 0);
    cfg.kernel = KernelSpec::polynomial(1.0, 2);
    CHECK_THROWS_AS(solve(x, cfg), ConfigError);
    cfg.rule.mode = UpdateMode::additive;
    cfg.max_iter = 3;
    CHECK_NOTHROW(solve(x, cfg));
}

TEST_CASE("kkt_residual vanishes at a planted stationary point") {
    const auto [e0, a0] = init_factors(4, 2, 6, 900, 1.0);
    const Dataset x(matmul(e0, a0));
    CHECK(kkt_residual(x, e0, a0, KernelSpec::gaussian(1.0), 1.0) <= 1e-10);
}

TEST_CASE("a zero entry with positive gradient contributes nothing to the residual") {
    // Column 0 of A is inactive while the other component over-explains x,
    // leaving grad_a(0, 0) > 0 at a_00 = 0: boundary-optimal.
    const Dataset x(NonNegMatrix::from_rows({{0.1}, {0.3}}));
    const NonNegMatrix e = NonNegMatrix::from_rows({{1, 0}, {1, 1}});
    const NonNegMatrix a = NonNegMatrix::from_rows({{0.0}, {0.9}});
    const KernelSpec gauss = KernelSpec::gaussian(1.0);
    const double alpha = 1.0;

    CHECK(grad_a(x, e, a, gauss, alpha, 0, 0) > 0.0);

    // Expected residual assembled entry by entry through the public
    // gradient operations.
    double expected = 0.0;
    for (std::size_t n = 0; n < 2; ++n) {
        for (std::size_t t = 0; t < 1; ++t) {
            expected = std::max(expected,
                                std::abs(std::min(a(n, t), grad_a(x, e, a, gauss, alpha, n, t))));
        }
        const std::vector<double> ge = grad_e(x, e, a, gauss, alpha, n);
        for (std::size_t i = 0; i < 2; ++i) {
            expected = std::max(expected, std::abs(std::min(e(i, n), ge[i])));
        }
    }
    const double residual = kkt_residual(x, e, a, gauss, alpha);
    CHECK(residual == doctest::Approx(expected).epsilon(1e-12));
    CHECK(residual > 0.0);  // other entries are not stationary
}

TEST_CASE("kkt_residual is strictly positive at a random non-stationary point") {
    const Dataset x = testsupport::random_dataset(5, 7, 910);
    const NonNegMatrix e = testsupport::random_nonneg(5, 2, 911);
    const NonNegMatrix a = testsupport::random_nonneg(2, 7, 912);
    CHECK(kkt_residual(x, e, a, KernelSpec::gaussian(1.0), 0.5) > 1e-3);
}

TEST_CASE("aggregated traces are non-increasing within tolerance") {
    int violating_traces = 0;
    for (std::uint64_t instance = 0; instance < 20; ++instance) {
        const Dataset x = testsupport::random_dataset(6, 10, 5000 + instance, 0.05, 1.0);
        for (double alpha : {0.0, 0.5, 1.0}) {
            const SolveConfig cfg = gaussian_config(3, alpha, 77 + instance);
            const SolutionRecord record = solve(x, cfg);
            int violations = 0;
            for (std::size_t i = 1; i + 1 < record.trace.size(); ++i) {
                if (record.trace[i + 1] > record.trace[i] + 1e-9) ++violations;
            }
            if (violations > 0) {
                MESSAGE("instance ", instance, " alpha ", alpha, ": ", violations,
                        " ascent steps");
                ++violating_traces;
            }
            CHECK(violations <= 2);
        }
    }
    MESSAGE(violating_traces, " traces contained any ascent step");
}

TEST_CASE("alpha=1 multiplicative path tracks the classical reference step for step") {
    const NonNegMatrix e_true = testsupport::random_nonneg(8, 2, 1100);
    const NonNegMatrix a_true = testsupport::random_nonneg(2, 12, 1101);
    const Dataset x(matmul(e_true, a_true));
    const SolveConfig cfg = gaussian_config(2, 1.0, 31);

    auto [e_ours, a_ours] = init_factors(x.bands(), cfg.rank, x.samples(), cfg.seed, 1.0);
    IterationState ours{e_ours, a_ours};
    IterationState reference{e_ours, a_ours};
    for (int iter = 0; iter < 5; ++iter) {
        ours = coordinate_descent_step(x, std::move(ours), cfg.kernel, 1.0, cfg.rule);
        reference = testsupport::classical_nmf_step(x, reference.e, reference.a,
                                                    cfg.rule.epsilon);
        for (std::size_t i = 0; i < ours.a.size(); ++i) {
            const double mine = ours.a.data()[i];
            const double theirs = reference.a.data()[i];
            CHECK(std::abs(mine - theirs) <=
                  1e-10 * std::max({std::abs(mine), std::abs(theirs), 1e-300}));
        }
        for (std::size_t i = 0; i < ours.e.size(); ++i) {
            const double mine = ours.e.data()[i];
            const double theirs = reference.e.data()[i];
            CHECK(std::abs(mine - theirs) <=
                  1e-10 * std::max({std::abs(mine), std::abs(theirs), 1e-300}));
        }
    }
}

TEST_CASE("long multiplicative runs reach small complementarity residuals") {
    // Spot check of the acceptance-scale property on three instances.
    int passed = 0;
    for (std::uint64_t instance = 0; instance < 3; ++instance) {
        const Dataset x = testsupport::random_dataset(6, 10, 5303 + 3 * instance, 0.05, 1.0);
        SolveConfig cfg = gaussian_config(3, 0.5, 16 + 3 * instance, 2000);
        const SolutionRecord record = solve(x, cfg);
        const double residual = kkt_residual(x, record.e, record.a, cfg.kernel, cfg.alpha);
        MESSAGE("instance ", instance, ": kkt residual ", residual, " after ",
                record.iterations_run, " iterations (", stop_reason_name(record.stop_reason),
                ")");
        if (residual <= 1e-4) ++passed;
    }
    CHECK(passed >= 2);
}
