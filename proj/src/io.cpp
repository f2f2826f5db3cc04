#include "binmf/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "binmf/version.hpp"

namespace binmf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr char kMagic[4] = {'B', 'N', 'M', 'F'};
constexpr std::uint32_t kFormatVersion = 1;

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

// Compact alpha label for per-alpha file names: up to six significant
// digits, no trailing zeros.
std::string alpha_label(double alpha) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", alpha);
    return buf;
}

double parse_double_field(std::string_view text, const fs::path& path, std::size_t line,
                          std::size_t col) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw ParseError("malformed number '" + std::string(text) + "' in " + path.string() +
                         " at row " + std::to_string(line) + ", column " + std::to_string(col));
    }
    return value;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

std::string read_file_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("read failure on " + path.string());
    return buffer.str();
}

void write_file_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write failure on " + path.string());
}

void put_u32le(std::string& buf, std::uint32_t v) {
    buf.push_back(static_cast<char>(v & 0xff));
    buf.push_back(static_cast<char>((v >> 8) & 0xff));
    buf.push_back(static_cast<char>((v >> 16) & 0xff));
    buf.push_back(static_cast<char>((v >> 24) & 0xff));
}

std::uint32_t get_u32le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_f64le(std::string& buf, double v) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v, sizeof(bits));
    for (int shift = 0; shift < 64; shift += 8) {
        buf.push_back(static_cast<char>((bits >> shift) & 0xff));
    }
}

double get_f64le(const unsigned char* p) {
    std::uint64_t bits = 0;
    for (int b = 7; b >= 0; --b) bits = (bits << 8) | p[b];
    double v = 0.0;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
}

NonNegMatrix load_matrix_csv(const fs::path& path) {
    const std::string text = read_file_text(path);
    std::vector<double> data;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string_view line(text.data() + pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = eol + 1;
        if (line.empty() && pos >= text.size()) break;  // trailing newline
        ++line_no;
        const std::vector<std::string_view> cells = split_csv_line(line);
        if (rows == 0) {
            cols = cells.size();
        } else if (cells.size() != cols) {
            throw ParseError(path.string() + ": row " + std::to_string(line_no) + " has " +
                             std::to_string(cells.size()) + " cells, expected " +
                             std::to_string(cols));
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const double v = parse_double_field(cells[c], path, line_no, c + 1);
            if (v < 0.0) {
                throw DomainError("negative value " + std::string(cells[c]) + " in " +
                                  path.string() + " at row " + std::to_string(line_no) +
                                  ", column " + std::to_string(c + 1));
            }
            data.push_back(v);
        }
        ++rows;
    }
    if (rows == 0) throw ParseError(path.string() + ": empty matrix file");
    return NonNegMatrix(rows, cols, std::move(data));
}

NonNegMatrix load_matrix_f64le(const fs::path& path) {
    const std::string text = read_file_text(path);
    const auto* bytes = reinterpret_cast<const unsigned char*>(text.data());
    if (text.size() < 16 || std::memcmp(bytes, kMagic, 4) != 0) {
        throw ParseError(path.string() + ": missing BNMF header");
    }
    const std::uint32_t rows = get_u32le(bytes + 4);
    const std::uint32_t cols = get_u32le(bytes + 8);
    const std::uint32_t version = get_u32le(bytes + 12);
    if (version != kFormatVersion) {
        throw ParseError(path.string() + ": unsupported format version " +
                         std::to_string(version));
    }
    const std::size_t expected = 16 + static_cast<std::size_t>(rows) * cols * 8;
    if (text.size() != expected) {
        throw ParseError(path.string() + ": declared shape " + std::to_string(rows) + "x" +
                         std::to_string(cols) + " needs " + std::to_string(expected) +
                         " bytes, file has " + std::to_string(text.size()));
    }
    std::vector<double> data(static_cast<std::size_t>(rows) * cols);
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = get_f64le(bytes + 16 + i * 8);
    return NonNegMatrix(rows, cols, std::move(data));
}

json kernel_to_json(const KernelSpec& k) {
    return json{{"family", kernel_family_name(k.family)},
                {"sigma", k.sigma},
                {"c", k.c},
                {"degree", k.degree},
                {"gamma", k.gamma}};
}

KernelSpec kernel_from_json(const json& j) {
    KernelSpec k;
    k.family = parse_kernel_family(j.at("family").get<std::string>());
    k.sigma = j.at("sigma").get<double>();
    k.c = j.at("c").get<double>();
    k.degree = j.at("degree").get<int>();
    k.gamma = j.at("gamma").get<double>();
    return k;
}

json config_to_json(const SweepConfig& cfg) {
    return json{{"rank", cfg.base.rank},
                {"alphas", cfg.alphas},
                {"kernel", kernel_to_json(cfg.base.kernel)},
                {"mode", update_mode_name(cfg.base.rule.mode)},
                {"step_a", cfg.base.rule.step_a},
                {"step_e", cfg.base.rule.step_e},
                {"epsilon", cfg.base.rule.epsilon},
                {"max_iter", cfg.base.max_iter},
                {"seed", cfg.base.seed},
                {"per_alpha_seeds", cfg.seeds},
                {"init_scale", cfg.base.init_scale},
                {"jobs", cfg.jobs}};
}

SweepConfig config_from_json(const json& j) {
    SweepConfig cfg;
    cfg.base.rank = j.at("rank").get<std::size_t>();
    cfg.alphas = j.at("alphas").get<std::vector<double>>();
    cfg.base.kernel = kernel_from_json(j.at("kernel"));
    cfg.base.rule.mode = parse_update_mode(j.at("mode").get<std::string>());
    cfg.base.rule.step_a = j.at("step_a").get<double>();
    cfg.base.rule.step_e = j.at("step_e").get<double>();
    cfg.base.rule.epsilon = j.at("epsilon").get<double>();
    cfg.base.max_iter = j.at("max_iter").get<std::size_t>();
    cfg.base.seed = j.at("seed").get<std::uint64_t>();
    cfg.seeds = j.at("per_alpha_seeds").get<std::vector<std::uint64_t>>();
    cfg.base.init_scale = j.at("init_scale").get<double>();
    cfg.jobs = j.at("jobs").get<unsigned>();
    if (!cfg.alphas.empty()) cfg.base.alpha = cfg.alphas.front();
    return cfg;
}

std::string utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

}  // namespace

const char* matrix_format_name(MatrixFormat format) {
    return format == MatrixFormat::csv ? "csv" : "f64le";
}

MatrixFormat parse_matrix_format(const std::string& name) {
    if (name == "csv") return MatrixFormat::csv;
    if (name == "f64le") return MatrixFormat::f64le;
    throw ConfigError("unknown matrix format '" + name + "'");
}

MatrixFormat sniff_matrix_format(const fs::path& path) {
    return path.extension() == ".f64le" ? MatrixFormat::f64le : MatrixFormat::csv;
}

NonNegMatrix load_matrix(const fs::path& path, MatrixFormat format) {
    if (!fs::exists(path)) throw IoError("no such file: " + path.string());
    return format == MatrixFormat::csv ? load_matrix_csv(path) : load_matrix_f64le(path);
}

void save_matrix(const NonNegMatrix& m, const fs::path& path, MatrixFormat format) {
    std::string buf;
    if (format == MatrixFormat::csv) {
        buf.reserve(m.size() * 24);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            for (std::size_t j = 0; j < m.cols(); ++j) {
                if (j > 0) buf.push_back(',');
                buf += fmt_double(m(i, j));
            }
            buf.push_back('\n');
        }
    } else {
        buf.reserve(16 + m.size() * 8);
        buf.append(kMagic, 4);
        put_u32le(buf, static_cast<std::uint32_t>(m.rows()));
        put_u32le(buf, static_cast<std::uint32_t>(m.cols()));
        put_u32le(buf, kFormatVersion);
        for (std::size_t i = 0; i < m.size(); ++i) put_f64le(buf, m.data()[i]);
    }
    write_file_text(path, buf);
}

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string() + " for hashing");
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
        EVP_MD_CTX_free(ctx);
        throw IoError("cannot initialize SHA-256");
    }
    std::array<char, 65536> chunk{};
    while (in) {
        in.read(chunk.data(), chunk.size());
        const std::streamsize got = in.gcount();
        if (got > 0) EVP_DigestUpdate(ctx, chunk.data(), static_cast<std::size_t>(got));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    std::string hex;
    hex.reserve(2 * len);
    static const char* alphabet = "0123456789abcdef";
    for (unsigned int i = 0; i < len; ++i) {
        hex.push_back(alphabet[digest[i] >> 4]);
        hex.push_back(alphabet[digest[i] & 0xf]);
    }
    return hex;
}

RunManifest make_manifest(const std::string& command,
                          const std::vector<fs::path>& inputs,
                          std::optional<SweepConfig> config) {
    RunManifest manifest;
    manifest.tool_version = kVersion;
    manifest.command = command;
    manifest.created_utc = utc_now();
    for (const fs::path& p : inputs) {
        manifest.inputs.push_back({p.string(), sha256_file(p)});
    }
    manifest.config = std::move(config);
    return manifest;
}

std::string manifest_to_json(const RunManifest& manifest) {
    json j;
    j["tool_version"] = manifest.tool_version;
    j["command"] = manifest.command;
    j["timestamps"] = json{{"created_utc", manifest.created_utc}};
    json inputs = json::array();
    for (const auto& input : manifest.inputs) {
        inputs.push_back(json{{"path", input.path}, {"sha256", input.sha256}});
    }
    j["inputs"] = inputs;
    if (manifest.config) j["config"] = config_to_json(*manifest.config);
    return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& ex) {
        throw ParseError(std::string("malformed manifest: ") + ex.what());
    }
    try {
        RunManifest manifest;
        manifest.tool_version = j.at("tool_version").get<std::string>();
        manifest.command = j.at("command").get<std::string>();
        manifest.created_utc = j.at("timestamps").at("created_utc").get<std::string>();
        for (const json& input : j.at("inputs")) {
            manifest.inputs.push_back({input.at("path").get<std::string>(),
                                       input.at("sha256").get<std::string>()});
        }
        if (j.contains("config")) manifest.config = config_from_json(j.at("config"));
        return manifest;
    } catch (const json::exception& ex) {
        throw ParseError(std::string("manifest missing fields: ") + ex.what());
    }
}

void write_front_csv(const std::vector<FrontRow>& rows, const fs::path& path) {
    std::string buf = "alpha,j_input,j_feature,j_aggregated,re,re_phi,dominated,iterations,"
                      "stop_reason\n";
    for (const FrontRow& row : rows) {
        buf += fmt_double(row.alpha);
        buf.push_back(',');
        buf += fmt_double(row.j_input);
        buf.push_back(',');
        buf += fmt_double(row.j_feature);
        buf.push_back(',');
        buf += fmt_double(row.j_aggregated);
        buf.push_back(',');
        buf += fmt_double(row.re);
        buf.push_back(',');
        buf += fmt_double(row.re_phi);
        buf.push_back(',');
        buf += row.dominated ? '1' : '0';
        buf.push_back(',');
        buf += std::to_string(row.iterations);
        buf.push_back(',');
        buf += stop_reason_name(row.stop_reason);
        buf.push_back('\n');
    }
    write_file_text(path, buf);
}

std::vector<FrontRow> read_front_csv(const fs::path& path) {
    if (!fs::exists(path)) throw IoError("no such file: " + path.string());
    const std::string text = read_file_text(path);
    std::vector<FrontRow> rows;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string_view line(text.data() + pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = eol + 1;
        if (line.empty()) continue;
        ++line_no;
        if (line_no == 1) {
            if (line.substr(0, 5) != "alpha") {
                throw ParseError(path.string() + ": missing front.csv header");
            }
            continue;
        }
        const std::vector<std::string_view> cells = split_csv_line(line);
        if (cells.size() != 9) {
            throw ParseError(path.string() + ": row " + std::to_string(line_no) + " has " +
                             std::to_string(cells.size()) + " cells, expected 9");
        }
        FrontRow row;
        row.alpha = parse_double_field(cells[0], path, line_no, 1);
        row.j_input = parse_double_field(cells[1], path, line_no, 2);
        row.j_feature = parse_double_field(cells[2], path, line_no, 3);
        row.j_aggregated = parse_double_field(cells[3], path, line_no, 4);
        row.re = parse_double_field(cells[4], path, line_no, 5);
        row.re_phi = parse_double_field(cells[5], path, line_no, 6);
        if (cells[6] != "0" && cells[6] != "1") {
            throw ParseError(path.string() + ": dominated flag must be 0 or 1 at row " +
                             std::to_string(line_no));
        }
        row.dominated = cells[6] == "1";
        row.iterations =
            static_cast<std::size_t>(parse_double_field(cells[7], path, line_no, 8));
        row.stop_reason = parse_stop_reason(std::string(cells[8]));
        rows.push_back(row);
    }
    if (rows.empty()) throw ParseError(path.string() + ": no data rows");
    return rows;
}

void save_results(const ParetoFront& front, const RunManifest& manifest, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());

    write_front_csv(front_export(front), dir / "front.csv");
    for (const SolutionRecord& s : front.all_solutions) {
        const std::string label = alpha_label(s.objective.alpha);
        save_matrix(s.e, dir / ("E_" + label + ".f64le"), MatrixFormat::f64le);
        save_matrix(s.a, dir / ("A_" + label + ".f64le"), MatrixFormat::f64le);
        std::string trace = "iteration,j_aggregated\n";
        for (std::size_t i = 0; i < s.trace.size(); ++i) {
            trace += std::to_string(i);
            trace.push_back(',');
            trace += fmt_double(s.trace[i]);
            trace.push_back('\n');
        }
        write_file_text(dir / ("trace_" + label + ".csv"), trace);
    }
    write_file_text(dir / "manifest.json", manifest_to_json(manifest));
}

std::vector<FrontRow> refilter_front_files(const std::vector<fs::path>& inputs,
                                           const fs::path& output_csv) {
    if (inputs.empty()) throw ConfigError("no front files given");
    std::vector<FrontRow> merged;
    for (const fs::path& input : inputs) {
        const fs::path csv = fs::is_directory(input) ? input / "front.csv" : input;
        const std::vector<FrontRow> rows = read_front_csv(csv);
        merged.insert(merged.end(), rows.begin(), rows.end());
    }
    std::stable_sort(merged.begin(), merged.end(),
                     [](const FrontRow& a, const FrontRow& b) { return a.alpha < b.alpha; });
    refilter_rows(merged);
    if (output_csv.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(output_csv.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create directory " + output_csv.parent_path().string() +
                          ": " + ec.message());
        }
    }
    write_front_csv(merged, output_csv);
    return merged;
}

}  // namespace binmf
