#include "doctest.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "binmf.h"

namespace fs = std::filesystem;

namespace {

// Everything here exercises the shared-library surface only.

struct TempDir {
    explicit TempDir(const char* tag) {
        std::string tpl = (fs::temp_directory_path() / (std::string("binmf_capi_") + tag +
                                                        "_XXXXXX"))
                              .string();
        REQUIRE(mkdtemp(tpl.data()) != nullptr);
        path = tpl;
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    fs::path path;
};

binmf_solve_options small_options(double alpha, uint64_t seed) {
    binmf_solve_options opts;
    binmf_solve_options_init(&opts);
    opts.rank = 2;
    opts.alpha = alpha;
    opts.kernel.sigma = 1.0;
    opts.max_iter = 20;
    opts.seed = seed;
    return opts;
}

binmf_matrix* random_like_matrix() {
    const double data[12] = {0.8, 0.2, 0.4, 0.7, 0.1, 0.9, 0.3, 0.2, 0.5, 0.5, 0.6, 0.4};
    binmf_matrix* m = nullptr;
    REQUIRE(binmf_matrix_create(3, 4, data, &m) == BINMF_OK);
    return m;
}

}  // namespace

TEST_CASE("version and error strings") {
    CHECK(std::strlen(binmf_version()) > 0);
    CHECK(std::string(binmf_status_name(BINMF_ERR_IO)) == "io");
    CHECK(std::string(binmf_stop_reason_name(BINMF_STOP_STATIONARY)) == "stationary");
}

TEST_CASE("matrix creation, accessors and validation") {
    binmf_matrix* m = random_like_matrix();
    CHECK(binmf_matrix_rows(m) == 3);
    CHECK(binmf_matrix_cols(m) == 4);

    double out[12] = {0};
    CHECK(binmf_matrix_copy_data(m, out, 12) == BINMF_OK);
    CHECK(out[0] == 0.8);
    CHECK(binmf_matrix_copy_data(m, out, 5) == BINMF_ERR_BOUNDS);
    binmf_matrix_destroy(m);

    const double bad[2] = {1.0, -0.5};
    binmf_matrix* rejected = nullptr;
    CHECK(binmf_matrix_create(1, 2, bad, &rejected) == BINMF_ERR_DOMAIN);
    CHECK(std::strlen(binmf_last_error()) > 0);
    CHECK(binmf_matrix_create(0, 2, bad, &rejected) == BINMF_ERR_CONFIG);
}

TEST_CASE("matrix save and load round trip through the C surface") {
    TempDir dir("roundtrip");
    binmf_matrix* m = random_like_matrix();
    const std::string path = (dir.path / "m.f64le").string();
    REQUIRE(binmf_matrix_save(m, path.c_str(), BINMF_FORMAT_F64LE) == BINMF_OK);

    binmf_matrix* back = nullptr;
    REQUIRE(binmf_matrix_load(path.c_str(), BINMF_FORMAT_F64LE, &back) == BINMF_OK);
    double a[12];
    double b[12];
    CHECK(binmf_matrix_copy_data(m, a, 12) == BINMF_OK);
    CHECK(binmf_matrix_copy_data(back, b, 12) == BINMF_OK);
    CHECK(std::memcmp(a, b, sizeof(a)) == 0);
    binmf_matrix_destroy(m);
    binmf_matrix_destroy(back);

    binmf_matrix* missing = nullptr;
    CHECK(binmf_matrix_load((dir.path / "absent.csv").string().c_str(), BINMF_FORMAT_CSV,
                            &missing) == BINMF_ERR_IO);
}

TEST_CASE("solve exposes objective, trace and factors") {
    binmf_matrix* x = random_like_matrix();
    const binmf_solve_options opts = small_options(0.5, 3);
    binmf_solution* s = nullptr;
    REQUIRE(binmf_solve(x, &opts, &s) == BINMF_OK);

    const int64_t iters = binmf_solution_iterations(s);
    CHECK(iters >= 1);
    CHECK(binmf_solution_trace_length(s) == iters + 1);
    std::vector<double> trace(static_cast<std::size_t>(iters + 1));
    CHECK(binmf_solution_trace(s, trace.data(), iters + 1) == BINMF_OK);

    double ji = 0.0;
    double jf = 0.0;
    double alpha = 0.0;
    double jagg = 0.0;
    CHECK(binmf_solution_objective(s, &ji, &jf, &alpha, &jagg) == BINMF_OK);
    CHECK(alpha == 0.5);
    CHECK(jagg == doctest::Approx(0.5 * ji + 0.5 * jf).epsilon(1e-15));
    CHECK(trace.back() == jagg);

    binmf_matrix* e = nullptr;
    binmf_matrix* a = nullptr;
    CHECK(binmf_solution_factors(s, &e, &a) == BINMF_OK);
    CHECK(binmf_matrix_rows(e) == 3);
    CHECK(binmf_matrix_cols(e) == 2);
    CHECK(binmf_matrix_rows(a) == 2);
    CHECK(binmf_matrix_cols(a) == 4);

    double re = 0.0;
    double re_phi = 0.0;
    CHECK(binmf_metrics(x, e, a, &opts.kernel, &re, &re_phi) == BINMF_OK);
    CHECK(re >= 0.0);
    CHECK(re_phi >= 0.0);

    binmf_matrix_destroy(e);
    binmf_matrix_destroy(a);
    binmf_solution_destroy(s);
    binmf_matrix_destroy(x);
}

TEST_CASE("invalid configurations surface as config errors") {
    binmf_matrix* x = random_like_matrix();
    binmf_solve_options opts = small_options(0.5, 3);
    opts.kernel.family = BINMF_KERNEL_POLYNOMIAL;
    opts.kernel.degree = 2;
    binmf_solution* s = nullptr;
    CHECK(binmf_solve(x, &opts, &s) == BINMF_ERR_CONFIG);
    CHECK(std::string(binmf_last_error()).find("gaussian") != std::string::npos);

    opts = small_options(1.5, 3);
    CHECK(binmf_solve(x, &opts, &s) == BINMF_ERR_DOMAIN);
    binmf_matrix_destroy(x);
}

TEST_CASE("sweep, front accessors and saving") {
    TempDir dir("front");
    binmf_matrix* x = random_like_matrix();
    const binmf_solve_options base = small_options(0.0, 11);
    const double alphas[3] = {0.0, 0.5, 1.0};

    binmf_front* front = nullptr;
    REQUIRE(binmf_sweep(x, &base, alphas, 3, nullptr, 0, 2, &front) == BINMF_OK);
    CHECK(binmf_front_size(front) == 3);

    int64_t dominated = 0;
    for (int64_t i = 0; i < 3; ++i) {
        const int flag = binmf_front_is_dominated(front, i);
        CHECK(flag >= 0);
        dominated += flag;
        const binmf_solution* s = binmf_front_solution(front, i);
        REQUIRE(s != nullptr);
        double alpha = 0.0;
        CHECK(binmf_solution_objective(s, nullptr, nullptr, &alpha, nullptr) == BINMF_OK);
        CHECK(alpha == alphas[i]);
    }
    CHECK(binmf_front_nondominated_count(front) == 3 - dominated);
    CHECK(binmf_front_is_dominated(front, 99) == -1);
    CHECK(binmf_front_solution(front, 99) == nullptr);

    char* manifest = nullptr;
    REQUIRE(binmf_manifest_build("sweep", nullptr, 0, &base, alphas, 3, nullptr, 0, 2,
                                 &manifest) == BINMF_OK);
    CHECK(std::string(manifest).find("\"command\": \"sweep\"") != std::string::npos);

    const std::string out = (dir.path / "results").string();
    REQUIRE(binmf_front_save(front, out.c_str(), manifest) == BINMF_OK);
    CHECK(fs::exists(dir.path / "results" / "front.csv"));
    CHECK(fs::exists(dir.path / "results" / "manifest.json"));

    binmf_string_free(manifest);
    binmf_front_destroy(front);
    binmf_matrix_destroy(x);
}

TEST_CASE("dominance helpers agree with a local brute force") {
    CHECK(binmf_dominates(1, 2, 2, 3) == 1);
    CHECK(binmf_dominates(1, 2, 1, 2) == 0);
    CHECK(binmf_dominates(1, 3, 2, 2) == 0);

    const int n = 40;
    std::vector<double> ji(n);
    std::vector<double> jf(n);
    unsigned state = 12345;
    auto next = [&state]() {
        state = state * 1103515245u + 12345u;
        return static_cast<double>((state >> 16) % 7);
    };
    for (int i = 0; i < n; ++i) {
        ji[i] = next();
        jf[i] = next();
    }
    std::vector<int> flags(n, 0);
    REQUIRE(binmf_filter_nondominated(ji.data(), jf.data(), n, flags.data()) == BINMF_OK);
    for (int i = 0; i < n; ++i) {
        int expected = 0;
        for (int j = 0; j < n && expected == 0; ++j) {
            if (j != i && binmf_dominates(ji[j], jf[j], ji[i], jf[i]) == 1) expected = 1;
        }
        CHECK(flags[i] == expected);
    }
}

TEST_CASE("solution save writes a singleton results directory") {
    TempDir dir("single");
    binmf_matrix* x = random_like_matrix();
    const binmf_solve_options opts = small_options(1.0, 5);
    binmf_solution* s = nullptr;
    REQUIRE(binmf_solve(x, &opts, &s) == BINMF_OK);
    const std::string out = (dir.path / "run").string();
    REQUIRE(binmf_solution_save(s, out.c_str(), nullptr) == BINMF_OK);
    CHECK(fs::exists(dir.path / "run" / "front.csv"));
    CHECK(fs::exists(dir.path / "run" / "E_1.f64le"));
    CHECK(fs::exists(dir.path / "run" / "A_1.f64le"));
    CHECK(fs::exists(dir.path / "run" / "trace_1.csv"));
    binmf_solution_destroy(s);
    binmf_matrix_destroy(x);
}

TEST_CASE("front csv refilter through the C surface") {
    TempDir dir("refilter");
    binmf_matrix* x = random_like_matrix();

    // Two single-point runs with different iteration budgets.
    for (int run = 0; run < 2; ++run) {
        binmf_solve_options opts = small_options(0.5, 21);
        opts.max_iter = run == 0 ? 2 : 40;
        binmf_solution* s = nullptr;
        REQUIRE(binmf_solve(x, &opts, &s) == BINMF_OK);
        const std::string out = (dir.path / ("run" + std::to_string(run))).string();
        REQUIRE(binmf_solution_save(s, out.c_str(), nullptr) == BINMF_OK);
        binmf_solution_destroy(s);
    }
    const std::string in0 = (dir.path / "run0").string();
    const std::string in1 = (dir.path / "run1").string();
    const char* inputs[2] = {in0.c_str(), in1.c_str()};
    const std::string merged = (dir.path / "merged.csv").string();
    int64_t rows = 0;
    int64_t kept = 0;
    REQUIRE(binmf_front_csv_refilter(inputs, 2, merged.c_str(), &rows, &kept) == BINMF_OK);
    CHECK(rows == 2);
    CHECK(kept >= 1);
    binmf_matrix_destroy(x);
}
