#include "binmf.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "binmf/io.hpp"
#include "binmf/metrics.hpp"
#include "binmf/pareto.hpp"
#include "binmf/solver.hpp"
#include "binmf/version.hpp"

namespace {

thread_local std::string g_last_error;

binmf_status status_from_kind(binmf::ErrorKind kind) {
    switch (kind) {
        case binmf::ErrorKind::domain: return BINMF_ERR_DOMAIN;
        case binmf::ErrorKind::shape: return BINMF_ERR_SHAPE;
        case binmf::ErrorKind::bounds: return BINMF_ERR_BOUNDS;
        case binmf::ErrorKind::config: return BINMF_ERR_CONFIG;
        case binmf::ErrorKind::numeric: return BINMF_ERR_NUMERIC;
        case binmf::ErrorKind::parse: return BINMF_ERR_PARSE;
        case binmf::ErrorKind::io: return BINMF_ERR_IO;
    }
    return BINMF_ERR_INTERNAL;
}

template <typename Fn>
binmf_status guarded(Fn&& fn) {
    try {
        g_last_error.clear();
        fn();
        return BINMF_OK;
    } catch (const binmf::Error& err) {
        g_last_error = err.what();
        return status_from_kind(err.kind());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return BINMF_ERR_INTERNAL;
    } catch (const std::exception& ex) {
        g_last_error = ex.what();
        return BINMF_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return BINMF_ERR_INTERNAL;
    }
}

binmf_status fail_argument(const char* msg) {
    g_last_error = msg;
    return BINMF_ERR_CONFIG;
}

binmf::KernelSpec kernel_from_c(const binmf_kernel_spec& k) {
    binmf::KernelSpec spec;
    switch (k.family) {
        case BINMF_KERNEL_GAUSSIAN: spec.family = binmf::KernelFamily::gaussian; break;
        case BINMF_KERNEL_POLYNOMIAL: spec.family = binmf::KernelFamily::polynomial; break;
        case BINMF_KERNEL_EXPONENTIAL: spec.family = binmf::KernelFamily::exponential; break;
        case BINMF_KERNEL_SIGMOID: spec.family = binmf::KernelFamily::sigmoid; break;
        default:
            throw binmf::ConfigError("unknown kernel family code " + std::to_string(k.family));
    }
    spec.sigma = k.sigma;
    spec.c = k.c;
    spec.degree = k.degree;
    spec.gamma = k.gamma;
    spec.validate();
    return spec;
}

binmf::SolveConfig solve_config_from_c(const binmf_solve_options& opts) {
    binmf::SolveConfig cfg;
    if (opts.rank < 1) throw binmf::ConfigError("rank must be at least 1");
    if (opts.max_iter < 1) throw binmf::ConfigError("max_iter must be at least 1");
    cfg.rank = static_cast<std::size_t>(opts.rank);
    cfg.alpha = opts.alpha;
    cfg.kernel = kernel_from_c(opts.kernel);
    switch (opts.mode) {
        case BINMF_MODE_MULTIPLICATIVE:
            cfg.rule.mode = binmf::UpdateMode::multiplicative;
            break;
        case BINMF_MODE_ADDITIVE: cfg.rule.mode = binmf::UpdateMode::additive; break;
        default:
            throw binmf::ConfigError("unknown update mode code " + std::to_string(opts.mode));
    }
    cfg.rule.step_a = opts.step_a;
    cfg.rule.step_e = opts.step_e;
    cfg.rule.epsilon = opts.epsilon;
    cfg.max_iter = static_cast<std::size_t>(opts.max_iter);
    cfg.seed = opts.seed;
    cfg.init_scale = opts.init_scale;
    cfg.validate();
    return cfg;
}

binmf::SweepConfig sweep_config_from_c(const binmf_solve_options& base, const double* alphas,
                                       int64_t n_alphas, const uint64_t* seeds, int64_t n_seeds,
                                       int jobs) {
    binmf::SweepConfig cfg;
    cfg.base = solve_config_from_c(base);
    if (alphas != nullptr && n_alphas > 0) {
        cfg.alphas.assign(alphas, alphas + n_alphas);
    }
    if (seeds != nullptr && n_seeds > 0) {
        cfg.seeds.assign(seeds, seeds + n_seeds);
    }
    cfg.jobs = jobs <= 0 ? 0 : static_cast<unsigned>(jobs);
    cfg.validate();
    return cfg;
}

binmf::MatrixFormat format_from_c(int format) {
    switch (format) {
        case BINMF_FORMAT_CSV: return binmf::MatrixFormat::csv;
        case BINMF_FORMAT_F64LE: return binmf::MatrixFormat::f64le;
        default: throw binmf::ConfigError("unknown format code " + std::to_string(format));
    }
}

}  // namespace

struct binmf_matrix {
    binmf::NonNegMatrix value;
};

struct binmf_solution {
    binmf::SolutionRecord record;
};

struct binmf_front {
    binmf::ParetoFront front;
    std::vector<binmf_solution> views;  // borrowed handles into `front`
    std::vector<bool> dominated;

    void build_views() {
        views.clear();
        views.reserve(front.all_solutions.size());
        for (const binmf::SolutionRecord& s : front.all_solutions) views.push_back({s});
        dominated.assign(front.all_solutions.size(), false);
        for (std::size_t i : front.dominated_indices) dominated[i] = true;
    }
};

extern "C" {

void binmf_solve_options_init(binmf_solve_options* opts) {
    if (opts == nullptr) return;
    opts->rank = 1;
    opts->alpha = 1.0;
    opts->kernel.family = BINMF_KERNEL_GAUSSIAN;
    opts->kernel.sigma = 1.0;
    opts->kernel.c = 0.0;
    opts->kernel.degree = 2;
    opts->kernel.gamma = 1.0;
    opts->mode = BINMF_MODE_MULTIPLICATIVE;
    opts->step_a = 1e-3;
    opts->step_e = 1e-3;
    opts->epsilon = 1e-12;
    opts->max_iter = 300;
    opts->seed = 0;
    opts->init_scale = 1.0;
}

const char* binmf_version(void) { return binmf::kVersion; }

const char* binmf_last_error(void) { return g_last_error.c_str(); }

const char* binmf_status_name(binmf_status status) {
    switch (status) {
        case BINMF_OK: return "ok";
        case BINMF_ERR_DOMAIN: return "domain";
        case BINMF_ERR_SHAPE: return "shape";
        case BINMF_ERR_BOUNDS: return "bounds";
        case BINMF_ERR_CONFIG: return "config";
        case BINMF_ERR_NUMERIC: return "numeric";
        case BINMF_ERR_PARSE: return "parse";
        case BINMF_ERR_IO: return "io";
        case BINMF_ERR_INTERNAL: return "internal";
    }
    return "?";
}

const char* binmf_stop_reason_name(int reason) {
    return reason == BINMF_STOP_STATIONARY ? "stationary" : "max_iter";
}

binmf_status binmf_matrix_create(int64_t rows, int64_t cols, const double* data,
                                 binmf_matrix** out) {
    if (out == nullptr) return fail_argument("out pointer is null");
    if (data == nullptr) return fail_argument("data pointer is null");
    if (rows < 1 || cols < 1) return fail_argument("matrix dimensions must be positive");
    return guarded([&] {
        std::vector<double> values(data, data + rows * cols);
        *out = new binmf_matrix{binmf::NonNegMatrix(static_cast<std::size_t>(rows),
                                                    static_cast<std::size_t>(cols),
                                                    std::move(values))};
    });
}

binmf_status binmf_matrix_load(const char* path, int format, binmf_matrix** out) {
    if (out == nullptr || path == nullptr) return fail_argument("null argument");
    return guarded([&] {
        *out = new binmf_matrix{binmf::load_matrix(path, format_from_c(format))};
    });
}

binmf_status binmf_matrix_save(const binmf_matrix* m, const char* path, int format) {
    if (m == nullptr || path == nullptr) return fail_argument("null argument");
    return guarded([&] { binmf::save_matrix(m->value, path, format_from_c(format)); });
}

int64_t binmf_matrix_rows(const binmf_matrix* m) {
    return m == nullptr ? -1 : static_cast<int64_t>(m->value.rows());
}

int64_t binmf_matrix_cols(const binmf_matrix* m) {
    return m == nullptr ? -1 : static_cast<int64_t>(m->value.cols());
}

binmf_status binmf_matrix_copy_data(const binmf_matrix* m, double* out, int64_t capacity) {
    if (m == nullptr || out == nullptr) return fail_argument("null argument");
    if (capacity < static_cast<int64_t>(m->value.size())) {
        g_last_error = "buffer holds " + std::to_string(capacity) + " doubles, need " +
                       std::to_string(m->value.size());
        return BINMF_ERR_BOUNDS;
    }
    std::memcpy(out, m->value.data(), m->value.size() * sizeof(double));
    return BINMF_OK;
}

void binmf_matrix_destroy(binmf_matrix* m) { delete m; }

binmf_status binmf_solve(const binmf_matrix* x, const binmf_solve_options* opts,
                         binmf_solution** out) {
    if (x == nullptr || opts == nullptr || out == nullptr) return fail_argument("null argument");
    return guarded([&] {
        const binmf::Dataset data(x->value);
        *out = new binmf_solution{binmf::solve(data, solve_config_from_c(*opts))};
    });
}

binmf_status binmf_solution_factors(const binmf_solution* s, binmf_matrix** out_e,
                                    binmf_matrix** out_a) {
    if (s == nullptr) return fail_argument("null solution");
    return guarded([&] {
        if (out_e != nullptr) *out_e = new binmf_matrix{s->record.e};
        if (out_a != nullptr) *out_a = new binmf_matrix{s->record.a};
    });
}

binmf_status binmf_solution_objective(const binmf_solution* s, double* j_input,
                                      double* j_feature, double* alpha, double* j_aggregated) {
    if (s == nullptr) return fail_argument("null solution");
    if (j_input != nullptr) *j_input = s->record.objective.j_input;
    if (j_feature != nullptr) *j_feature = s->record.objective.j_feature;
    if (alpha != nullptr) *alpha = s->record.objective.alpha;
    if (j_aggregated != nullptr) *j_aggregated = s->record.objective.j_aggregated;
    return BINMF_OK;
}

int64_t binmf_solution_iterations(const binmf_solution* s) {
    return s == nullptr ? -1 : static_cast<int64_t>(s->record.iterations_run);
}

int binmf_solution_stop_reason(const binmf_solution* s) {
    if (s == nullptr) return -1;
    return s->record.stop_reason == binmf::StopReason::stationary ? BINMF_STOP_STATIONARY
                                                                  : BINMF_STOP_MAX_ITER;
}

int64_t binmf_solution_trace_length(const binmf_solution* s) {
    return s == nullptr ? -1 : static_cast<int64_t>(s->record.trace.size());
}

binmf_status binmf_solution_trace(const binmf_solution* s, double* out, int64_t capacity) {
    if (s == nullptr || out == nullptr) return fail_argument("null argument");
    if (capacity < static_cast<int64_t>(s->record.trace.size())) {
        g_last_error = "buffer holds " + std::to_string(capacity) + " doubles, need " +
                       std::to_string(s->record.trace.size());
        return BINMF_ERR_BOUNDS;
    }
    std::memcpy(out, s->record.trace.data(), s->record.trace.size() * sizeof(double));
    return BINMF_OK;
}

binmf_status binmf_solution_save(const binmf_solution* s, const char* dir,
                                 const char* manifest_json) {
    if (s == nullptr || dir == nullptr) return fail_argument("null argument");
    return guarded([&] {
        binmf::ParetoFront front;
        front.all_solutions.push_back(s->record);
        front.nondominated_indices.push_back(0);
        binmf::RunManifest manifest;
        if (manifest_json != nullptr) manifest = binmf::manifest_from_json(manifest_json);
        binmf::save_results(front, manifest, dir);
    });
}

void binmf_solution_destroy(binmf_solution* s) { delete s; }

binmf_status binmf_sweep(const binmf_matrix* x, const binmf_solve_options* base,
                         const double* alphas, int64_t n_alphas, const uint64_t* seeds,
                         int64_t n_seeds, int jobs, binmf_front** out) {
    if (x == nullptr || base == nullptr || out == nullptr) return fail_argument("null argument");
    return guarded([&] {
        const binmf::Dataset data(x->value);
        const binmf::SweepConfig cfg =
            sweep_config_from_c(*base, alphas, n_alphas, seeds, n_seeds, jobs);
        auto* handle = new binmf_front{binmf::sweep(data, cfg), {}, {}};
        handle->build_views();
        *out = handle;
    });
}

int64_t binmf_front_size(const binmf_front* front) {
    return front == nullptr ? -1 : static_cast<int64_t>(front->front.all_solutions.size());
}

const binmf_solution* binmf_front_solution(const binmf_front* front, int64_t index) {
    if (front == nullptr || index < 0 ||
        index >= static_cast<int64_t>(front->views.size())) {
        return nullptr;
    }
    return &front->views[static_cast<std::size_t>(index)];
}

int binmf_front_is_dominated(const binmf_front* front, int64_t index) {
    if (front == nullptr || index < 0 ||
        index >= static_cast<int64_t>(front->dominated.size())) {
        return -1;
    }
    return front->dominated[static_cast<std::size_t>(index)] ? 1 : 0;
}

int64_t binmf_front_nondominated_count(const binmf_front* front) {
    return front == nullptr ? -1
                            : static_cast<int64_t>(front->front.nondominated_indices.size());
}

int binmf_front_conflict_interval(const binmf_front* front, double* lo, double* hi) {
    if (front == nullptr) return 0;
    const auto interval = binmf::conflicting_alpha_interval(binmf::front_export(front->front));
    if (!interval) return 0;
    if (lo != nullptr) *lo = interval->first;
    if (hi != nullptr) *hi = interval->second;
    return 1;
}

binmf_status binmf_front_save(const binmf_front* front, const char* dir,
                              const char* manifest_json) {
    if (front == nullptr || dir == nullptr) return fail_argument("null argument");
    return guarded([&] {
        binmf::RunManifest manifest;
        if (manifest_json != nullptr) manifest = binmf::manifest_from_json(manifest_json);
        binmf::save_results(front->front, manifest, dir);
    });
}

void binmf_front_destroy(binmf_front* front) { delete front; }

binmf_status binmf_metrics(const binmf_matrix* x, const binmf_matrix* e, const binmf_matrix* a,
                           const binmf_kernel_spec* kernel, double* out_re,
                           double* out_re_phi) {
    if (x == nullptr || e == nullptr || a == nullptr || kernel == nullptr) {
        return fail_argument("null argument");
    }
    return guarded([&] {
        const binmf::Dataset data(x->value);
        const binmf::MetricReport r =
            binmf::report(data, e->value, a->value, kernel_from_c(*kernel));
        if (out_re != nullptr) *out_re = r.re;
        if (out_re_phi != nullptr) *out_re_phi = r.re_phi;
    });
}

int binmf_dominates(double jx_u, double jh_u, double jx_v, double jh_v) {
    binmf::ObjectiveVector u{jx_u, jh_u, 0.0, 0.0};
    binmf::ObjectiveVector v{jx_v, jh_v, 0.0, 0.0};
    return binmf::dominates(u, v) ? 1 : 0;
}

binmf_status binmf_filter_nondominated(const double* j_input, const double* j_feature,
                                       int64_t n, int* out_dominated) {
    if (j_input == nullptr || j_feature == nullptr || out_dominated == nullptr) {
        return fail_argument("null argument");
    }
    if (n < 1) return fail_argument("need at least one point");
    return guarded([&] {
        std::vector<binmf::FrontRow> rows(static_cast<std::size_t>(n));
        for (int64_t i = 0; i < n; ++i) {
            rows[static_cast<std::size_t>(i)].j_input = j_input[i];
            rows[static_cast<std::size_t>(i)].j_feature = j_feature[i];
        }
        binmf::refilter_rows(rows);
        for (int64_t i = 0; i < n; ++i) {
            out_dominated[i] = rows[static_cast<std::size_t>(i)].dominated ? 1 : 0;
        }
    });
}

binmf_status binmf_front_csv_refilter(const char* const* inputs, int64_t n_inputs,
                                      const char* output_csv, int64_t* out_rows,
                                      int64_t* out_nondominated) {
    if (inputs == nullptr || output_csv == nullptr) return fail_argument("null argument");
    if (n_inputs < 1) return fail_argument("need at least one input front");
    return guarded([&] {
        std::vector<std::filesystem::path> paths;
        for (int64_t i = 0; i < n_inputs; ++i) {
            if (inputs[i] == nullptr) throw binmf::ConfigError("null input path");
            paths.emplace_back(inputs[i]);
        }
        const std::vector<binmf::FrontRow> rows =
            binmf::refilter_front_files(paths, output_csv);
        if (out_rows != nullptr) *out_rows = static_cast<int64_t>(rows.size());
        if (out_nondominated != nullptr) {
            int64_t count = 0;
            for (const binmf::FrontRow& row : rows) count += row.dominated ? 0 : 1;
            *out_nondominated = count;
        }
    });
}

binmf_status binmf_manifest_build(const char* command, const char* const* input_paths,
                                  int64_t n_inputs, const binmf_solve_options* base,
                                  const double* alphas, int64_t n_alphas,
                                  const uint64_t* seeds, int64_t n_seeds, int jobs,
                                  char** out_json) {
    if (command == nullptr || out_json == nullptr) return fail_argument("null argument");
    return guarded([&] {
        std::vector<std::filesystem::path> paths;
        for (int64_t i = 0; i < n_inputs; ++i) {
            if (input_paths == nullptr || input_paths[i] == nullptr) {
                throw binmf::ConfigError("null input path");
            }
            paths.emplace_back(input_paths[i]);
        }
        std::optional<binmf::SweepConfig> cfg;
        if (base != nullptr) {
            cfg = sweep_config_from_c(*base, alphas, n_alphas, seeds, n_seeds, jobs);
        }
        const binmf::RunManifest manifest =
            binmf::make_manifest(command, paths, std::move(cfg));
        const std::string text = binmf::manifest_to_json(manifest);
        char* buffer = new char[text.size() + 1];
        std::memcpy(buffer, text.c_str(), text.size() + 1);
        *out_json = buffer;
    });
}

void binmf_string_free(char* s) { delete[] s; }

}  // extern "C"
