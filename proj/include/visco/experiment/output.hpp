#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "visco/spectral/field.hpp"

namespace visco::experiment {

namespace fs = std::filesystem;

inline constexpr const char* kSummarySchema = "visco.summary/1";
inline constexpr const char* kManifestSchema = "visco.manifest/1";
inline constexpr const char* kCheckpointSchema = "visco.checkpoint/1";

const char* code_version();

/// Writes to a temporary sibling, flushes it to disk and renames it into place.
void write_file_durably(const fs::path& path, const std::string& contents);

/// Table with a header row; numbers are printed with 17 significant digits so
/// that repeated runs compare byte for byte.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);
  void add_row(const std::vector<double>& row);
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }
  std::vector<double> column(const std::string& name) const;
  std::string str() const;
  void write(const fs::path& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
};

CsvTable read_csv(const fs::path& path);

struct Series {
  std::string label;
  std::vector<double> x, y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = true;
  std::vector<Series> series;
};

/// Self-contained SVG line plot. Nonpositive values are dropped on log axes.
std::string render_svg(const PlotSpec& p);
void write_svg(const fs::path& path, const PlotSpec& p);

void write_json(const fs::path& path, const nlohmann::json& j);
nlohmann::json read_json(const fs::path& path);

struct RunManifest {
  std::string config_hash;
  std::string code_version;
  /// role -> path relative to the output directory
  std::map<std::string, std::string> files;
  std::vector<std::string> records;
  std::vector<std::string> checkpoints;
  std::map<std::string, double> timings;
  std::string status = "ok";

  nlohmann::json to_json() const;
};

/// Checks that every referenced file exists, then writes manifest.json last.
fs::path write_manifest(const fs::path& out_dir, const RunManifest& m);

struct CheckpointFiles {
  std::string eta, u, sidecar;
};

/// eta and u as VTRS snapshots plus a JSON sidecar with the step metadata.
CheckpointFiles write_checkpoint(const fs::path& out_dir, const std::string& stem,
                                 const Spectrum& eta, const Spectrum& u, double t, long steps,
                                 const nlohmann::json& extra);

struct Checkpoint {
  Spectrum eta, u;
  double t = 0.0;
  long steps = 0;
  nlohmann::json sidecar;
};

Checkpoint read_checkpoint(const fs::path& sidecar_path);

}  // namespace visco::experiment
