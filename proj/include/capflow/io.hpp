#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "capflow/diagnostics.hpp"
#include "capflow/flow.hpp"
#include "json.hpp"

namespace capflow {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses the JSON run description; throws ConfigError on schema or range
// violations.
FlowConfig parse_config(const nlohmann::json& j);
nlohmann::json load_json(const std::filesystem::path& path);

// k,t,lambda,volume,capillary,dissipation,penalty,off_volume,r_t
void write_trace_csv(const std::filesystem::path& path, const std::vector<StepRecord>& records);
// Per-step solver quantities used by the diagnostics: k, reference_energy,
// quantum, max_distance_moved, sym_diff_cells, velocity_sq, cut_solves.
void write_steps_csv(const std::filesystem::path& path, const std::vector<StepRecord>& records);
// Inverse of the two writers above; the files must list the same steps.
std::vector<StepRecord> read_records(const std::filesystem::path& trace_csv,
                                     const std::filesystem::path& steps_csv);

// Binary P5, 0 outside and 255 inside. The first stored row is the bottom
// row of cells; for d = 2 the rows of plane iz are stacked as iz * ny + iy.
void write_pgm(const std::filesystem::path& path, const IndicatorSet& e);
IndicatorSet read_pgm(const std::filesystem::path& path, const GridSpec& grid);
std::string snapshot_name(int k);

std::string sha256_file(const std::filesystem::path& path);

struct ManifestEntry {
  std::string file;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

// Hashes every listed file (paths relative to dir) and writes manifest.json.
void write_manifest(const std::filesystem::path& dir, const nlohmann::json& config_echo,
                    const std::vector<std::string>& files, const nlohmann::json& extra);
std::vector<ManifestEntry> read_manifest_files(const std::filesystem::path& dir);

// Writes trace.csv, steps.csv, the snapshots and config.json into dir.
// Returns the file names written, relative to dir.
std::vector<std::string> write_trace_dir(const std::filesystem::path& dir, const FlowTrace& trace,
                                         const nlohmann::json& config_echo);
// Rebuilds a trace from a directory produced by write_trace_dir.
FlowTrace read_trace_dir(const std::filesystem::path& dir);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace capflow
