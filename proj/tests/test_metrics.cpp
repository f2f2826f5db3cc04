#include "doctest.h"

#include <cmath>
#include <numeric>

#include "binmf/metrics.hpp"
#include "binmf/objectives.hpp"
#include "support/random_instances.hpp"

using namespace binmf;

TEST_CASE("reconstruction_error frozen values") {
    const NonNegMatrix e = testsupport::random_nonneg(4, 2, 100);
    const NonNegMatrix a = testsupport::random_nonneg(2, 7, 101);
    const Dataset exact(matmul(e, a));
    CHECK(reconstruction_error(exact, e, a) == 0.0);

    // X = I2 against a zero reconstruction: sqrt(2 / 4).
    const Dataset identity(NonNegMatrix::from_rows({{1, 0}, {0, 1}}));
    const NonNegMatrix ez = NonNegMatrix::zeros(2, 1);
    const NonNegMatrix az = NonNegMatrix::zeros(1, 2);
    CHECK(reconstruction_error(identity, ez, az) ==
          doctest::Approx(0.70710678118654757).epsilon(1e-15));
}

TEST_CASE("metric identities against the objective values") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Dataset x = testsupport::random_dataset(5, 9, 200 + seed);
        const NonNegMatrix e = testsupport::random_nonneg(5, 3, 300 + seed);
        const NonNegMatrix a = testsupport::random_nonneg(3, 9, 400 + seed);
        const KernelSpec gauss = KernelSpec::gaussian(1.0);
        const double scale = 5.0 * 9.0;

        const double re = reconstruction_error(x, e, a);
        const double j_input = eval_j_input(x, e, a);
        CHECK(std::abs(re - std::sqrt(2.0 * j_input / scale)) <= 1e-12 * re);
        // RE^2 * T * L recovers twice the input-space objective.
        CHECK(std::abs(re * re * scale - 2.0 * j_input) <= 1e-12 * 2.0 * j_input);

        const double re_phi = reconstruction_error_feature(x, e, a, gauss);
        const double j_feature = eval_j_feature(x, e, a, gauss);
        CHECK(std::abs(re_phi - std::sqrt(2.0 * j_feature / scale)) <= 1e-12 * re_phi);
    }
}

TEST_CASE("feature-space error with zero abundances is sqrt(1/L) exactly") {
    for (std::size_t bands : {2ul, 3ul, 5ul, 7ul}) {
        const Dataset x = testsupport::random_dataset(bands, 6, 500 + bands);
        const NonNegMatrix e = testsupport::random_nonneg(bands, 2, 600 + bands);
        const NonNegMatrix a = NonNegMatrix::zeros(2, 6);
        const double re_phi =
            reconstruction_error_feature(x, e, a, KernelSpec::gaussian(2.0));
        const double expected = std::sqrt(1.0 / static_cast<double>(bands));
        CHECK(std::abs(re_phi - expected) <= 1e-15);
    }
}

TEST_CASE("feature-space error vanishes on an exactly representable dataset") {
    const Dataset x(NonNegMatrix::from_rows({{0.4, 0.4}, {0.6, 0.6}}));
    const NonNegMatrix e = NonNegMatrix::from_rows({{0.4}, {0.6}});
    const NonNegMatrix ones = NonNegMatrix::from_rows({{1, 1}});
    CHECK(reconstruction_error_feature(x, e, ones, KernelSpec::gaussian(1.0)) == 0.0);
}

TEST_CASE("single-pixel feature-space error matches the scalar expansion") {
    const Dataset x(NonNegMatrix::from_rows({{1}, {0}}));
    const NonNegMatrix e = NonNegMatrix::from_rows({{0.5}, {0.5}});
    const NonNegMatrix a = NonNegMatrix::from_rows({{1}});
    // sqrt(2 * 0.221199... / (1 * 2)) = sqrt(1 - exp(-0.25)) ~ 0.470318
    const double expected = std::sqrt(0.22119921692859513);
    CHECK(reconstruction_error_feature(x, e, a, KernelSpec::gaussian(1.0)) ==
          doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("metrics are invariant under matched factor permutations") {
    const Dataset x = testsupport::random_dataset(4, 8, 700);
    const NonNegMatrix e = testsupport::random_nonneg(4, 3, 701);
    const NonNegMatrix a = testsupport::random_nonneg(3, 8, 702);
    const KernelSpec gauss = KernelSpec::gaussian(1.0);

    const std::size_t perm[3] = {2, 0, 1};
    Matrix ep(4, 3);
    Matrix ap(3, 8);
    for (std::size_t n = 0; n < 3; ++n) {
        for (std::size_t i = 0; i < 4; ++i) ep(i, n) = e(i, perm[n]);
        for (std::size_t t = 0; t < 8; ++t) ap(n, t) = a(perm[n], t);
    }
    const NonNegMatrix e2(std::move(ep));
    const NonNegMatrix a2(std::move(ap));

    CHECK(reconstruction_error(x, e, a) ==
          doctest::Approx(reconstruction_error(x, e2, a2)).epsilon(1e-13));
    CHECK(reconstruction_error_feature(x, e, a, gauss) ==
          doctest::Approx(reconstruction_error_feature(x, e2, a2, gauss)).epsilon(1e-13));
}

TEST_CASE("report echoes dimensions and recomputes both metrics") {
    const Dataset x = testsupport::random_dataset(5, 7, 800);
    const NonNegMatrix e = testsupport::random_nonneg(5, 2, 801);
    const NonNegMatrix a = testsupport::random_nonneg(2, 7, 802);
    const KernelSpec gauss = KernelSpec::gaussian(1.4);
    const MetricReport r = report(x, e, a, gauss);
    CHECK(r.bands == 5);
    CHECK(r.samples == 7);
    CHECK(r.rank == 2);
    CHECK(r.kernel.sigma == 1.4);
    CHECK(r.re == reconstruction_error(x, e, a));
    CHECK(r.re_phi == reconstruction_error_feature(x, e, a, gauss));
    CHECK(r.re >= 0.0);
    CHECK(r.re_phi >= 0.0);
}

TEST_CASE("metric shape mismatches raise shape errors") {
    const Dataset x = testsupport::random_dataset(4, 6, 900);
    const NonNegMatrix e = testsupport::random_nonneg(3, 2, 901);
    const NonNegMatrix a = testsupport::random_nonneg(2, 6, 902);
    CHECK_THROWS_AS(reconstruction_error(x, e, a), ShapeError);
    CHECK_THROWS_AS(reconstruction_error_feature(x, e, a, KernelSpec::gaussian(1.0)),
                    ShapeError);
}
