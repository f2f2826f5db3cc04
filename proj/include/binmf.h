/*
 * binmf — bi-objective nonnegative matrix factorization.
 *
 * C interface to the shared library. Handles are opaque; every fallible
 * call returns a binmf_status and leaves a human-readable message in
 * thread-local storage, retrievable with binmf_last_error(). Objects
 * returned through out-parameters are owned by the caller and must be
 * released with the matching *_destroy function.
 */
#ifndef BINMF_H
#define BINMF_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum binmf_status {
    BINMF_OK = 0,
    BINMF_ERR_DOMAIN = 1,   /* value outside its admissible range */
    BINMF_ERR_SHAPE = 2,    /* incompatible matrix dimensions */
    BINMF_ERR_BOUNDS = 3,   /* index out of range */
    BINMF_ERR_CONFIG = 4,   /* invalid option combination */
    BINMF_ERR_NUMERIC = 5,  /* non-finite or corrupt numeric result */
    BINMF_ERR_PARSE = 6,    /* malformed file content */
    BINMF_ERR_IO = 7,       /* filesystem failure */
    BINMF_ERR_INTERNAL = 8
} binmf_status;

typedef enum binmf_kernel_family {
    BINMF_KERNEL_GAUSSIAN = 0,
    BINMF_KERNEL_POLYNOMIAL = 1,
    BINMF_KERNEL_EXPONENTIAL = 2,
    BINMF_KERNEL_SIGMOID = 3
} binmf_kernel_family;

typedef enum binmf_update_mode {
    BINMF_MODE_MULTIPLICATIVE = 0,
    BINMF_MODE_ADDITIVE = 1
} binmf_update_mode;

typedef enum binmf_stop_reason {
    BINMF_STOP_STATIONARY = 0,
    BINMF_STOP_MAX_ITER = 1
} binmf_stop_reason;

typedef enum binmf_format {
    BINMF_FORMAT_CSV = 0,
    BINMF_FORMAT_F64LE = 1
} binmf_format;

/* Kernel family plus parameters; fields irrelevant to the family are
 * ignored. sigma: gaussian/exponential bandwidth (> 0); c: polynomial /
 * sigmoid offset; degree: polynomial degree (>= 1); gamma: sigmoid scale. */
typedef struct binmf_kernel_spec {
    int family;
    double sigma;
    double c;
    int degree;
    double gamma;
} binmf_kernel_spec;

/* Configuration of one sub-optimization run. */
typedef struct binmf_solve_options {
    int64_t rank;
    double alpha;        /* weight in [0, 1]; 1 = input space only */
    binmf_kernel_spec kernel;
    int mode;            /* binmf_update_mode; multiplicative requires gaussian */
    double step_a;       /* additive step size for abundances */
    double step_e;       /* additive step size for endmembers */
    double epsilon;      /* multiplicative denominator guard */
    int64_t max_iter;
    uint64_t seed;
    double init_scale;   /* initial entries uniform on (0, init_scale] */
} binmf_solve_options;

/* Fills defaults: rank 1, alpha 1, gaussian kernel with sigma 1,
 * multiplicative mode, steps 1e-3, epsilon 1e-12, max_iter 300, seed 0,
 * init_scale 1. */
void binmf_solve_options_init(binmf_solve_options* opts);

typedef struct binmf_matrix binmf_matrix;
typedef struct binmf_solution binmf_solution;
typedef struct binmf_front binmf_front;

const char* binmf_version(void);
/* Message from the most recent failing call on this thread ("" if none). */
const char* binmf_last_error(void);
const char* binmf_status_name(binmf_status status);
const char* binmf_stop_reason_name(int reason);

/* ---- matrices ---------------------------------------------------------- */

/* data is row-major, length rows*cols; entries must be finite and >= 0. */
binmf_status binmf_matrix_create(int64_t rows, int64_t cols, const double* data,
                                 binmf_matrix** out);
binmf_status binmf_matrix_load(const char* path, int format, binmf_matrix** out);
binmf_status binmf_matrix_save(const binmf_matrix* m, const char* path, int format);
int64_t binmf_matrix_rows(const binmf_matrix* m);
int64_t binmf_matrix_cols(const binmf_matrix* m);
/* Copies all rows*cols values (row-major) into out; capacity is the number
 * of doubles available at out. */
binmf_status binmf_matrix_copy_data(const binmf_matrix* m, double* out, int64_t capacity);
void binmf_matrix_destroy(binmf_matrix* m);

/* ---- solving ----------------------------------------------------------- */

binmf_status binmf_solve(const binmf_matrix* x, const binmf_solve_options* opts,
                         binmf_solution** out);

/* Factor copies; both out-parameters are new matrices owned by the caller.
 * Either may be NULL to skip it. */
binmf_status binmf_solution_factors(const binmf_solution* s, binmf_matrix** out_e,
                                    binmf_matrix** out_a);
binmf_status binmf_solution_objective(const binmf_solution* s, double* j_input,
                                      double* j_feature, double* alpha, double* j_aggregated);
int64_t binmf_solution_iterations(const binmf_solution* s);
int binmf_solution_stop_reason(const binmf_solution* s);
int64_t binmf_solution_trace_length(const binmf_solution* s);
binmf_status binmf_solution_trace(const binmf_solution* s, double* out, int64_t capacity);
/* Writes E_<alpha>.f64le, A_<alpha>.f64le, trace_<alpha>.csv, front.csv and
 * manifest.json (when manifest_json is non-NULL) into dir. */
binmf_status binmf_solution_save(const binmf_solution* s, const char* dir,
                                 const char* manifest_json);
void binmf_solution_destroy(binmf_solution* s);

/* ---- weight sweep and Pareto front ------------------------------------- */

/* Runs one solve per alpha (alphas strictly increasing in [0, 1]; NULL with
 * n_alphas == 0 selects the default grid {0, 0.02, ..., 0.98, 1}). seeds may
 * be NULL (reuse base->seed), a single shared seed (n_seeds == 1) or one
 * seed per alpha. jobs <= 0 uses all hardware threads; results do not depend
 * on the job count. */
binmf_status binmf_sweep(const binmf_matrix* x, const binmf_solve_options* base,
                         const double* alphas, int64_t n_alphas, const uint64_t* seeds,
                         int64_t n_seeds, int jobs, binmf_front** out);
int64_t binmf_front_size(const binmf_front* front);
/* Borrowed reference, valid while the front lives. */
const binmf_solution* binmf_front_solution(const binmf_front* front, int64_t index);
/* 1 if dominated, 0 if nondominated, -1 on a bad index. */
int binmf_front_is_dominated(const binmf_front* front, int64_t index);
int64_t binmf_front_nondominated_count(const binmf_front* front);
/* Alpha range over which consecutive grid solutions trade the two
 * objectives against each other. Returns 1 and fills *lo / *hi when such an
 * interval exists, 0 otherwise. Descriptive only. */
int binmf_front_conflict_interval(const binmf_front* front, double* lo, double* hi);
binmf_status binmf_front_save(const binmf_front* front, const char* dir,
                              const char* manifest_json);
void binmf_front_destroy(binmf_front* front);

/* ---- metrics ----------------------------------------------------------- */

/* Input-space and feature-space reconstruction errors of the pair (e, a)
 * against x. Either output pointer may be NULL. */
binmf_status binmf_metrics(const binmf_matrix* x, const binmf_matrix* e, const binmf_matrix* a,
                           const binmf_kernel_spec* kernel, double* out_re, double* out_re_phi);

/* ---- dominance --------------------------------------------------------- */

/* 1 iff (jx_u, jh_u) dominates (jx_v, jh_v): both coordinates <=, at least
 * one strictly <. Exact comparisons. */
int binmf_dominates(double jx_u, double jh_u, double jx_v, double jh_v);
/* out_dominated[i] = 1 iff some other point dominates point i. */
binmf_status binmf_filter_nondominated(const double* j_input, const double* j_feature,
                                       int64_t n, int* out_dominated);
/* Merges front.csv files (each input a results directory or a csv path),
 * recomputes dominated flags, writes the merged front to output_csv. On
 * success *out_rows / *out_nondominated (if non-NULL) receive the counts. */
binmf_status binmf_front_csv_refilter(const char* const* inputs, int64_t n_inputs,
                                      const char* output_csv, int64_t* out_rows,
                                      int64_t* out_nondominated);

/* ---- manifests --------------------------------------------------------- */

/* Builds the JSON run manifest: tool version, UTC timestamp, SHA-256 digest
 * of each input file, and (for factorize/sweep) the full configuration echo.
 * alphas may be NULL for commands without a weight grid. The returned string
 * must be released with binmf_string_free. */
binmf_status binmf_manifest_build(const char* command, const char* const* input_paths,
                                  int64_t n_inputs, const binmf_solve_options* base,
                                  const double* alphas, int64_t n_alphas,
                                  const uint64_t* seeds, int64_t n_seeds, int jobs,
                                  char** out_json);
void binmf_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* BINMF_H */
