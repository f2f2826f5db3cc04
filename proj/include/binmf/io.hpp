#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "binmf/matrix.hpp"
#include "binmf/pareto.hpp"

namespace binmf {

/// Matrix file formats.
///
/// csv    comma-separated decimal floats, one matrix row per line, no header
///        row, optional trailing newline; written with 17 significant digits
///        so values round-trip exactly.
/// f64le  16-byte header — magic "BNMF", rows (u32 little-endian), cols
///        (u32 little-endian), format version (u32 little-endian, = 1) —
///        followed by rows·cols IEEE-754 binary64 little-endian values in
///        row-major order.
enum class MatrixFormat { csv, f64le };

const char* matrix_format_name(MatrixFormat format);
MatrixFormat parse_matrix_format(const std::string& name);
/// Picks f64le for a ".f64le" extension, csv otherwise.
MatrixFormat sniff_matrix_format(const std::filesystem::path& path);

NonNegMatrix load_matrix(const std::filesystem::path& path, MatrixFormat format);
void save_matrix(const NonNegMatrix& m, const std::filesystem::path& path, MatrixFormat format);

/// Everything needed to reproduce a run: full configuration echo, tool
/// version, input digests and a creation timestamp.
struct RunManifest {
    struct InputRef {
        std::string path;
        std::string sha256;
    };

    std::string tool_version;
    std::string command;
    std::string created_utc;
    std::vector<InputRef> inputs;
    std::optional<SweepConfig> config;  // present for factorize and sweep runs
};

/// Hex-encoded SHA-256 of the file contents.
std::string sha256_file(const std::filesystem::path& path);

/// Manifest with the tool version, current UTC time and the digest of each
/// input already filled in.
RunManifest make_manifest(const std::string& command,
                          const std::vector<std::filesystem::path>& inputs,
                          std::optional<SweepConfig> config);

std::string manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const std::string& json_text);

void write_front_csv(const std::vector<FrontRow>& rows, const std::filesystem::path& path);
std::vector<FrontRow> read_front_csv(const std::filesystem::path& path);

/// Writes a results directory: front.csv, per-alpha factor files
/// E_<alpha>.f64le / A_<alpha>.f64le, per-alpha trace_<alpha>.csv files and
/// manifest.json. The directory is created if absent.
void save_results(const ParetoFront& front, const RunManifest& manifest,
                  const std::filesystem::path& dir);

/// Reads one or more fronts (a results directory or a front.csv path each),
/// merges the rows sorted by alpha, recomputes the dominated flags and
/// writes the merged front to output_csv. Returns the merged rows.
std::vector<FrontRow> refilter_front_files(const std::vector<std::filesystem::path>& inputs,
                                           const std::filesystem::path& output_csv);

}  // namespace binmf
