// binmf command-line tool: factorize, sweep, pareto and metrics subcommands
// over matrix files. All computation goes through the C API in binmf.h.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "binmf.h"

namespace {

struct MatrixDeleter {
    void operator()(binmf_matrix* m) const { binmf_matrix_destroy(m); }
};
struct SolutionDeleter {
    void operator()(binmf_solution* s) const { binmf_solution_destroy(s); }
};
struct FrontDeleter {
    void operator()(binmf_front* f) const { binmf_front_destroy(f); }
};
struct StringDeleter {
    void operator()(char* s) const { binmf_string_free(s); }
};
using MatrixPtr = std::unique_ptr<binmf_matrix, MatrixDeleter>;
using SolutionPtr = std::unique_ptr<binmf_solution, SolutionDeleter>;
using FrontPtr = std::unique_ptr<binmf_front, FrontDeleter>;
using ManifestPtr = std::unique_ptr<char, StringDeleter>;

int exit_code_for(binmf_status status) {
    return status == BINMF_ERR_IO ? 2 : 1;
}

int fail(binmf_status status) {
    std::fprintf(stderr, "binmf: %s error: %s\n", binmf_status_name(status),
                 binmf_last_error());
    return exit_code_for(status);
}

int fail_usage(const std::string& msg) {
    std::fprintf(stderr, "binmf: %s\n", msg.c_str());
    return 1;
}

// Common solver options shared by factorize and sweep.
struct SolverFlags {
    std::string input;
    std::string format;  // empty: infer from the file extension
    std::int64_t rank = 0;
    std::string kernel = "gaussian";
    double sigma = 0.0;
    double c = 0.0;
    int degree = 2;
    double gamma = 1.0;
    std::string mode = "multiplicative";
    double step_a = 1e-3;
    double step_e = 1e-3;
    std::int64_t max_iter = 300;
    std::uint64_t seed = 0;
    std::string out;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--input", input, "input matrix file (L bands x T samples)")
            ->required();
        cmd->add_option("--format", format, "matrix file format: csv or f64le")
            ->check(CLI::IsMember({"csv", "f64le"}));
        cmd->add_option("--rank", rank, "number of endmembers N")->required();
        cmd->add_option("--kernel", kernel, "kernel family")
            ->check(CLI::IsMember({"gaussian", "polynomial", "exponential", "sigmoid"}));
        cmd->add_option("--sigma", sigma, "kernel bandwidth (gaussian, exponential)");
        cmd->add_option("--c", c, "kernel offset (polynomial, sigmoid)");
        cmd->add_option("--d", degree, "polynomial degree");
        cmd->add_option("--gamma", gamma, "sigmoid scale");
        cmd->add_option("--mode", mode, "update mode")
            ->check(CLI::IsMember({"multiplicative", "additive"}));
        cmd->add_option("--step-a", step_a, "additive step size for abundances");
        cmd->add_option("--step-e", step_e, "additive step size for endmembers");
        cmd->add_option("--max-iter", max_iter, "iteration cap per solve");
        cmd->add_option("--seed", seed, "initialization seed");
        cmd->add_option("--out", out, "output directory")->required();
    }

    binmf_solve_options to_options(double alpha) const {
        binmf_solve_options opts;
        binmf_solve_options_init(&opts);
        opts.rank = rank;
        opts.alpha = alpha;
        if (kernel == "gaussian") opts.kernel.family = BINMF_KERNEL_GAUSSIAN;
        else if (kernel == "polynomial") opts.kernel.family = BINMF_KERNEL_POLYNOMIAL;
        else if (kernel == "exponential") opts.kernel.family = BINMF_KERNEL_EXPONENTIAL;
        else opts.kernel.family = BINMF_KERNEL_SIGMOID;
        opts.kernel.sigma = sigma;
        opts.kernel.c = c;
        opts.kernel.degree = degree;
        opts.kernel.gamma = gamma;
        opts.mode = mode == "multiplicative" ? BINMF_MODE_MULTIPLICATIVE : BINMF_MODE_ADDITIVE;
        opts.step_a = step_a;
        opts.step_e = step_e;
        opts.max_iter = max_iter;
        opts.seed = seed;
        return opts;
    }
};

int format_code(const std::string& explicit_format, const std::string& path) {
    if (explicit_format == "csv") return BINMF_FORMAT_CSV;
    if (explicit_format == "f64le") return BINMF_FORMAT_F64LE;
    const std::string::size_type dot = path.rfind('.');
    if (dot != std::string::npos && path.substr(dot) == ".f64le") return BINMF_FORMAT_F64LE;
    return BINMF_FORMAT_CSV;
}

bool parse_number(const std::string& text, double& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

// "start:step:end" or an explicit comma-separated list.
bool parse_alpha_grid(const std::string& spec, std::vector<double>& out) {
    out.clear();
    if (spec.find(':') != std::string::npos) {
        const std::string::size_type c1 = spec.find(':');
        const std::string::size_type c2 = spec.find(':', c1 + 1);
        if (c2 == std::string::npos || spec.find(':', c2 + 1) != std::string::npos) {
            return false;
        }
        double start = 0.0;
        double step = 0.0;
        double end = 0.0;
        if (!parse_number(spec.substr(0, c1), start) ||
            !parse_number(spec.substr(c1 + 1, c2 - c1 - 1), step) ||
            !parse_number(spec.substr(c2 + 1), end) || step <= 0.0 || end < start) {
            return false;
        }
        const std::int64_t count =
            static_cast<std::int64_t>(std::floor((end - start) / step + 1e-9)) + 1;
        for (std::int64_t k = 0; k < count; ++k) {
            double v = start + static_cast<double>(k) * step;
            if (v > 1.0 && v < 1.0 + 1e-9) v = 1.0;
            out.push_back(v);
        }
        return !out.empty();
    }
    std::string::size_type pos = 0;
    while (pos <= spec.size()) {
        const std::string::size_type comma = spec.find(',', pos);
        const std::string cell =
            spec.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        double v = 0.0;
        if (!parse_number(cell, v)) return false;
        out.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return !out.empty();
}

MatrixPtr load_input(const std::string& path, const std::string& format,
                     binmf_status& status) {
    binmf_matrix* raw = nullptr;
    status = binmf_matrix_load(path.c_str(), format_code(format, path), &raw);
    return MatrixPtr(raw);
}

void print_metrics(const binmf_matrix* x, const binmf_matrix* e, const binmf_matrix* a,
                   const binmf_kernel_spec& kernel) {
    double re = 0.0;
    double re_phi = 0.0;
    if (binmf_metrics(x, e, a, &kernel, &re, &re_phi) == BINMF_OK) {
        std::printf("RE %.16e\n", re);
        std::printf("RE_PHI %.16e\n", re_phi);
    } else {
        std::fprintf(stderr, "binmf: metrics unavailable: %s\n", binmf_last_error());
    }
}

int run_factorize(const SolverFlags& flags, double alpha) {
    binmf_status status = BINMF_OK;
    const MatrixPtr x = load_input(flags.input, flags.format, status);
    if (!x) return fail(status);

    const binmf_solve_options opts = flags.to_options(alpha);
    binmf_solution* raw_solution = nullptr;
    status = binmf_solve(x.get(), &opts, &raw_solution);
    if (status != BINMF_OK) return fail(status);
    const SolutionPtr solution(raw_solution);

    const char* input_path = flags.input.c_str();
    char* raw_manifest = nullptr;
    status = binmf_manifest_build("factorize", &input_path, 1, &opts, &alpha, 1, nullptr, 0, 1,
                                  &raw_manifest);
    if (status != BINMF_OK) return fail(status);
    const ManifestPtr manifest(raw_manifest);

    status = binmf_solution_save(solution.get(), flags.out.c_str(), manifest.get());
    if (status != BINMF_OK) return fail(status);

    binmf_matrix* raw_e = nullptr;
    binmf_matrix* raw_a = nullptr;
    if (binmf_solution_factors(solution.get(), &raw_e, &raw_a) == BINMF_OK) {
        const MatrixPtr e(raw_e);
        const MatrixPtr a(raw_a);
        print_metrics(x.get(), e.get(), a.get(), opts.kernel);
    }
    std::printf("iterations %lld (%s)\n",
                static_cast<long long>(binmf_solution_iterations(solution.get())),
                binmf_stop_reason_name(binmf_solution_stop_reason(solution.get())));
    return 0;
}

int run_sweep(const SolverFlags& flags, const std::string& alphas_spec, int jobs) {
    std::vector<double> alphas;
    if (alphas_spec.empty()) {
        for (int k = 0; k < 50; ++k) alphas.push_back(k * 0.02);
        alphas.push_back(1.0);
    } else if (!parse_alpha_grid(alphas_spec, alphas)) {
        return fail_usage("cannot parse --alphas '" + alphas_spec + "'");
    }

    binmf_status status = BINMF_OK;
    const MatrixPtr x = load_input(flags.input, flags.format, status);
    if (!x) return fail(status);

    const binmf_solve_options opts = flags.to_options(alphas.front());
    binmf_front* raw_front = nullptr;
    status = binmf_sweep(x.get(), &opts, alphas.data(),
                         static_cast<std::int64_t>(alphas.size()), nullptr, 0, jobs,
                         &raw_front);
    if (status != BINMF_OK) return fail(status);
    const FrontPtr front(raw_front);

    const char* input_path = flags.input.c_str();
    char* raw_manifest = nullptr;
    status = binmf_manifest_build("sweep", &input_path, 1, &opts, alphas.data(),
                                  static_cast<std::int64_t>(alphas.size()), nullptr, 0, jobs,
                                  &raw_manifest);
    if (status != BINMF_OK) return fail(status);
    const ManifestPtr manifest(raw_manifest);

    status = binmf_front_save(front.get(), flags.out.c_str(), manifest.get());
    if (status != BINMF_OK) return fail(status);

    const long long total = binmf_front_size(front.get());
    const long long kept = binmf_front_nondominated_count(front.get());
    std::printf("nondominated solutions: %lld of %lld (%lld dominated)\n", kept, total,
                total - kept);
    double lo = 0.0;
    double hi = 0.0;
    if (binmf_front_conflict_interval(front.get(), &lo, &hi) == 1) {
        std::printf("objectives-conflicting interval: alpha in [%g, %g]\n", lo, hi);
    }
    return 0;
}

int run_pareto(const std::vector<std::string>& inputs, std::string out) {
    if (out.empty()) {
        if (inputs.size() != 1) {
            return fail_usage("--out is required when merging multiple fronts");
        }
        out = inputs.front();
    }
    // A directory output means "rewrite/place front.csv inside".
    std::string out_csv = out;
    if (out_csv.size() < 4 || out_csv.substr(out_csv.size() - 4) != ".csv") {
        out_csv += "/front.csv";
    }

    std::vector<const char*> raw_inputs;
    raw_inputs.reserve(inputs.size());
    for (const std::string& p : inputs) raw_inputs.push_back(p.c_str());

    std::int64_t rows = 0;
    std::int64_t kept = 0;
    binmf_status status = binmf_front_csv_refilter(
        raw_inputs.data(), static_cast<std::int64_t>(raw_inputs.size()), out_csv.c_str(),
        &rows, &kept);
    if (status != BINMF_OK) return fail(status);

    // Manifest next to the rewritten front, digesting the source csv files.
    std::vector<std::string> csv_paths;
    for (const std::string& p : inputs) {
        std::string csv = p;
        if (csv.size() < 4 || csv.substr(csv.size() - 4) != ".csv") csv += "/front.csv";
        csv_paths.push_back(csv);
    }
    std::vector<const char*> manifest_inputs;
    for (const std::string& p : csv_paths) manifest_inputs.push_back(p.c_str());
    char* raw_manifest = nullptr;
    status = binmf_manifest_build("pareto", manifest_inputs.data(),
                                  static_cast<std::int64_t>(manifest_inputs.size()), nullptr,
                                  nullptr, 0, nullptr, 0, 0, &raw_manifest);
    if (status != BINMF_OK) return fail(status);
    const ManifestPtr manifest(raw_manifest);
    const std::string manifest_path =
        out_csv.substr(0, out_csv.find_last_of('/') + 1) + "manifest.json";
    if (FILE* f = std::fopen(manifest_path.c_str(), "wb")) {
        std::fputs(manifest.get(), f);
        std::fclose(f);
    } else {
        std::fprintf(stderr, "binmf: cannot write %s\n", manifest_path.c_str());
        return 2;
    }

    std::printf("nondominated solutions: %lld of %lld (%lld dominated)\n",
                static_cast<long long>(kept), static_cast<long long>(rows),
                static_cast<long long>(rows - kept));
    return 0;
}

int run_metrics(const std::string& input, const std::string& endmembers,
                const std::string& abundances, const std::string& format,
                const binmf_kernel_spec& kernel) {
    binmf_status status = BINMF_OK;
    const MatrixPtr x = load_input(input, format, status);
    if (!x) return fail(status);
    const MatrixPtr e = load_input(endmembers, format, status);
    if (!e) return fail(status);
    const MatrixPtr a = load_input(abundances, format, status);
    if (!a) return fail(status);

    double re = 0.0;
    double re_phi = 0.0;
    status = binmf_metrics(x.get(), e.get(), a.get(), &kernel, &re, &re_phi);
    if (status != BINMF_OK) return fail(status);
    std::printf("RE %.16e\n", re);
    std::printf("RE_PHI %.16e\n", re_phi);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bi-objective nonnegative matrix factorization (linear + kernel models)"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(binmf_version()));

    SolverFlags fac_flags;
    double fac_alpha = 0.0;
    CLI::App* fac = app.add_subcommand(
        "factorize", "solve one weighted sub-problem and write E/A/trace/manifest");
    fac_flags.add_to(fac);
    fac->add_option("--alpha", fac_alpha, "trade-off weight in [0,1]")->required();

    SolverFlags sweep_flags;
    std::string sweep_alphas;
    int sweep_jobs = 0;
    CLI::App* swp = app.add_subcommand(
        "sweep", "run the weight sweep and write the approximated Pareto front");
    sweep_flags.add_to(swp);
    swp->add_option("--alphas", sweep_alphas,
                    "weight grid: 'start:step:end' or comma list (default 0:0.02:1)");
    swp->add_option("--jobs", sweep_jobs, "concurrent solves (default: all cores)");

    std::vector<std::string> pareto_inputs;
    std::string pareto_out;
    CLI::App* par = app.add_subcommand(
        "pareto", "re-run dominance filtering over stored fronts (merging allowed)");
    par->add_option("--input", pareto_inputs, "results directory or front.csv (repeatable)")
        ->required();
    par->add_option("--out", pareto_out, "output directory or csv path");

    std::string met_input;
    std::string met_e;
    std::string met_a;
    std::string met_format;
    std::string met_kernel = "gaussian";
    double met_sigma = 0.0;
    double met_c = 0.0;
    int met_degree = 2;
    double met_gamma = 1.0;
    CLI::App* met = app.add_subcommand(
        "metrics", "input- and feature-space reconstruction errors of stored factors");
    met->add_option("--input", met_input, "data matrix X")->required();
    met->add_option("--endmembers", met_e, "endmember matrix E")->required();
    met->add_option("--abundances", met_a, "abundance matrix A")->required();
    met->add_option("--format", met_format, "matrix file format for all three files")
        ->check(CLI::IsMember({"csv", "f64le"}));
    met->add_option("--kernel", met_kernel, "kernel family")
        ->check(CLI::IsMember({"gaussian", "polynomial", "exponential", "sigmoid"}));
    met->add_option("--sigma", met_sigma, "kernel bandwidth");
    met->add_option("--c", met_c, "kernel offset");
    met->add_option("--d", met_degree, "polynomial degree");
    met->add_option("--gamma", met_gamma, "sigmoid scale");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (fac->parsed()) return run_factorize(fac_flags, fac_alpha);
    if (swp->parsed()) return run_sweep(sweep_flags, sweep_alphas, sweep_jobs);
    if (par->parsed()) return run_pareto(pareto_inputs, pareto_out);
    if (met->parsed()) {
        binmf_kernel_spec kernel;
        kernel.family = BINMF_KERNEL_GAUSSIAN;
        if (met_kernel == "polynomial") kernel.family = BINMF_KERNEL_POLYNOMIAL;
        else if (met_kernel == "exponential") kernel.family = BINMF_KERNEL_EXPONENTIAL;
        else if (met_kernel == "sigmoid") kernel.family = BINMF_KERNEL_SIGMOID;
        kernel.sigma = met_sigma;
        kernel.c = met_c;
        kernel.degree = met_degree;
        kernel.gamma = met_gamma;
        return run_metrics(met_input, met_e, met_a, met_format, kernel);
    }
    return 1;
}
