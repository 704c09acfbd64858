#pragma once

#include <exception>
#include <string>
#include <variant>
#include <vector>

#include "visco/diagnostics.hpp"
#include "visco/experiment/config.hpp"
#include "visco/experiment/output.hpp"
#include "visco/linear_reference.hpp"

namespace visco::experiment {

/// One model run, either incompressible or compressible, driven by a config.
class Simulation {
 public:
  explicit Simulation(const ExperimentConfig& c);

  Model model() const { return config_.model; }
  const ExperimentConfig& config() const { return config_; }
  double t() const;
  long steps() const;
  const Spectrum& eta() const;
  const Spectrum& u() const;
  double last_dt() const { return last_dt_; }

  /// Steps until t == target; the final step is shortened to land on it.
  void advance_to(double target);
  DiagnosticsRecord record() const;

  const InitialData& initial() const { return initial_; }
  const DiagnosticsReference& reference() const { return reference_; }
  const FlowState* incompressible() const { return std::get_if<FlowState>(&state_); }
  const CompressibleState* compressible() const { return std::get_if<CompressibleState>(&state_); }

 private:
  ExperimentConfig config_;
  InitialData initial_;
  DiagnosticsReference reference_;
  std::variant<FlowState, CompressibleState> state_;
  double last_dt_ = 0.0;
};

/// Sample times 0, h, 2h, ... and t_final itself.
std::vector<double> sample_times(double t_final, double interval);

/// Linear solution the nonlinear run is compared with.
class LinearComparison {
 public:
  LinearComparison(const ExperimentConfig& c, const InitialData& d);
  LinearState at(double t) const;
  DeviationNorms deviation(const Simulation& sim) const;
  /// Corrector sizes and ratios (empty for the compressible model).
  nlohmann::json correctors() const { return correctors_; }

 private:
  ExperimentConfig config_;
  Spectrum eta0_, u0_;
  nlohmann::json correctors_ = nlohmann::json::object();
};

struct Trajectory {
  std::vector<DiagnosticsRecord> records;
  std::vector<double> dt;
  std::vector<long> steps;
  std::vector<DeviationNorms> deviation;  // filled when compared with the linear solution
  std::vector<std::string> checkpoints;   // paths relative to the output directory
  nlohmann::json correctors = nlohmann::json::object();
  double initial_i0h = 0.0;
  double wall_seconds = 0.0;
  std::exception_ptr error;  // set when the run stopped early

  CsvTable diagnostics_table() const;
  CsvTable deviation_table() const;
};

/// Runs c from t = 0 to t_final, sampling at sample_interval. Checkpoints go to
/// out_dir when checkpoint_interval > 0 and out_dir is not empty. Errors thrown
/// by the solver are captured in the result, not rethrown.
Trajectory simulate(const ExperimentConfig& c, bool compare_linear, const fs::path& out_dir = {});

struct CommandResult {
  nlohmann::json summary;
  RunManifest manifest;
  std::exception_ptr error;
};

CommandResult cmd_run(const ExperimentConfig& c);
CommandResult cmd_compare_linear(const ExperimentConfig& c);
CommandResult cmd_straighten(const ExperimentConfig& c);
CommandResult cmd_drift(const ExperimentConfig& c);
CommandResult cmd_sweep(const ExperimentConfig& c);

/// Reads manifest and summary of a finished output directory, checks the
/// referenced files and renders a plain-text report.
std::string cmd_report(const fs::path& out_dir);

/// Slope of log y against log x by least squares.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Worker count for sweeps: VISCO_THREADS if set, else the OpenMP default.
int worker_count(int members, bool parallel);

/// 0 ok, 2 config, 3 singular map, 4 no convergence, 5 step rejected, 1 other.
int exit_code(const std::exception_ptr& e);
std::string error_kind(const std::exception_ptr& e);

}  // namespace visco::experiment
