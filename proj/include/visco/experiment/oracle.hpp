#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "visco/experiment/config.hpp"

namespace visco::experiment {

struct OracleCheck {
  std::string name;
  double value = 0.0;      // worst observed error
  double tolerance = 0.0;
  int trials = 0;
  bool pass = false;
};

struct OracleReport {
  std::vector<OracleCheck> checks;
  bool inject_fault = false;
  bool pass() const;
  nlohmann::json to_json() const;
};

/// Identity and closed-form checks on the configured grid: FFT round trip,
/// Leray projection, Piola identity, determinant expansion, manufactured
/// pressure solve and the damped-oscillator mode evolution. With inject_fault
/// the manufactured right-hand side is perturbed so that the solve must miss.
OracleReport run_oracles(const ExperimentConfig& c);

/// Writes summary.json and the manifest; the caller maps a failure to exit code 6.
OracleReport cmd_oracle(const ExperimentConfig& c);

}  // namespace visco::experiment
