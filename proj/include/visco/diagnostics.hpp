#pragma once

#include <array>
#include <string>
#include <vector>

#include "visco/compressible.hpp"
#include "visco/incompressible.hpp"

namespace visco {

using Vec3 = std::array<double, 3>;

/// ||u||_2^2 + kappa ||grad eta||_2^2.
double i0h(const Spectrum& u, const Spectrum& eta, double kappa);

/// Box average of a vector field (the integral divided by the box volume).
Vec3 volume_average(const Spectrum& v);

/// u minus its box average.
Spectrum mean_free(const Spectrum& u);

struct Straightening {
  double l2 = 0.0;   // ||eta_bar||_0
  double sup = 0.0;  // max |eta_bar|
};

/// eta_bar(y) = eta(y1, y2, y3) - eta(y1, y2, 0).
Straightening straightening(const Spectrum& eta);

/// ||eta - u0_avg t - varpi||_k (default k = 3).
double drift_residual(const Spectrum& eta, const Vec3& u0_avg, const Vec3& varpi, double t,
                      int order = 3);

struct EnergyConstants {
  double c4 = 1.0;
  double c5 = 1.0;
};

struct EnergyFunctionals {
  double E = 0.0;   // (rho ||u||^2 + kappa ||grad eta||^2)/2, or the compressible bracket
  double D = 0.0;   // dissipation rate
  double E1 = 0.0;
  double E2 = 0.0;  // E2, or E2P for compressible states
};

EnergyFunctionals energy_functionals(const FlowState& s, const DeformationPack& pack,
                                     const EnergyConstants& c = {});
EnergyFunctionals energy_functionals(const CompressibleState& s, const DeformationPack& pack,
                                     const EnergyConstants& c = {});

/// Compressible energy bracket with its rest-state value removed; nonnegative.
double compressible_energy_excess(const CompressibleState& s, const DeformationPack& pack);

struct DeviationNorms {
  double u = 0.0;       // ||u^d||_2^2
  double eta = 0.0;     // kappa ||eta^d||_3^2
  double combined = 0.0;
};

DeviationNorms deviation_norms(const Spectrum& u, const Spectrum& eta, const Spectrum& u_lin,
                               const Spectrum& eta_lin, double kappa);

/// Reference data fixed at t = 0 and used by every later sample.
struct DiagnosticsReference {
  Vec3 u0_avg{};
  Vec3 varpi{};
  double kappa = 1.0;
  EnergyConstants constants;
};

DiagnosticsReference make_reference(const Spectrum& eta0, const Spectrum& u0, double kappa,
                                    const EnergyConstants& c = {});

struct DiagnosticsRecord {
  double t = 0.0;
  double u_h2 = 0.0;
  double grad_eta_h2 = 0.0;
  double ubar_h2 = 0.0;
  double stability = 0.0;  // ||(u_bar, sqrt(kappa) grad eta)||_2
  double E = 0.0;
  double D = 0.0;
  double E1 = 0.0;
  double E2 = 0.0;
  double div_eta_h2 = 0.0;
  double etabar_l2 = 0.0;
  double etabar_sup = 0.0;
  double drift_l2 = 0.0;
  double drift_h3 = 0.0;
  int pressure_iters = 0;
  double min_j = 1.0;
  double max_j = 1.0;
  double piola = 0.0;
  Vec3 u_mean{};

  static std::vector<std::string> columns();
  std::vector<double> values() const;
};

DiagnosticsRecord record(const FlowState& s, const DiagnosticsReference& ref);
DiagnosticsRecord record(const CompressibleState& s, const DiagnosticsReference& ref);

}  // namespace visco
