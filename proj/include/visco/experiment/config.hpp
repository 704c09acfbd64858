#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "visco/compressible.hpp"
#include "visco/incompressible.hpp"

namespace visco::experiment {

enum class Model { Incompressible, Compressible };
enum class Kind { Run, Sweep, CompareLinear, Straighten, Drift, Oracle };

enum class VelocityKind { Zero, Mode, Abc, Random };

struct VelocityRecipe {
  VelocityKind kind = VelocityKind::Zero;
  double amplitude = 0.0;
  /// Mode recipe: amplitude * direction * sin(k.y + phase).
  std::array<int, 3> k{0, 1, 0};
  std::array<double, 3> direction{1.0, 0.0, 0.0};
  double phase = 0.0;
  /// Random recipe: coefficients ~ k^-4 up to kmax.
  int kmax = 4;
  /// Constant added after projection.
  std::array<double, 3> mean{0.0, 0.0, 0.0};
};

struct InitialRecipe {
  EtaKind eta_kind = EtaKind::Zero;
  std::vector<Shear> shears;
  VelocityRecipe u;
  std::uint64_t seed = 1;
};

struct ExperimentConfig {
  std::string name = "visco";
  Kind experiment = Kind::Run;
  Model model = Model::Incompressible;
  Grid grid = Grid::cube(16);

  double rho = 1.0;
  double mu = 1.0;
  double lambda = 1.0;
  double kappa = 1.0;
  double pressure_a = 1.0;
  double pressure_gamma = 1.0;

  SchemeConfig scheme;
  InitialRecipe initial;

  double t_final = 1.0;
  double sample_interval = 0.1;
  /// Time between checkpoints; 0 disables them.
  double checkpoint_interval = 0.0;
  std::filesystem::path out_dir = "out";
  bool parallel = true;

  std::vector<double> sweep_kappa;
  int oracle_trials = 20;
  bool oracle_inject_fault = false;

  FlowParams flow_params() const { return {rho, mu, kappa}; }
  CompressibleParams compressible_params() const;
  void validate() const;
};

ExperimentConfig parse_config(const std::string& toml_text);
ExperimentConfig load_config(const std::filesystem::path& path);

const char* to_string(Kind k);
const char* to_string(Model m);
Kind parse_kind(const std::string& s);

/// Every resolved setting; the dump of this object is what gets hashed.
nlohmann::json to_json(const ExperimentConfig& c);
/// FNV-1a of the compact JSON dump, as 16 hex digits.
std::string config_hash(const ExperimentConfig& c);

}  // namespace visco::experiment
