#pragma once

#include <optional>

#include "visco/incompressible.hpp"
#include "visco/kinematics.hpp"
#include "visco/pressure_law.hpp"

namespace visco {

struct CompressibleParams {
  double rho_bar = 1.0;
  double mu = 1.0;
  /// Bulk viscosity plus mu/3.
  double lambda = 1.0;
  double kappa = 1.0;
  PressureLaw pressure;
  void validate() const;
  double zeta_bulk() const { return lambda - mu / 3.0; }
};

struct CompressibleState {
  Spectrum eta;  // 3
  Spectrum u;    // 3
  double t = 0.0;
  CompressibleParams params;
  long steps = 0;
  std::optional<SchemeHistory> history;

  const Grid& grid() const { return u.grid(); }
};

/// Geometry for compressible runs: A = cof/J.
DeformationPack compressible_pack(const Spectrum& eta, double j_floor = 0.1);

/// rho_bar / J sampled on the base grid.
Field density_field(const CompressibleState& s);

/// Right-hand side of rho_bar u_t = kappa Lap eta + J(mu Lap_A u + lambda grad_A div_A u)
/// - J grad_A P(rho_bar/J) with the constant-coefficient part removed. Products
/// with J A are formed with the cofactor matrix, so the box mean is exactly zero.
Spectrum n2_conservative(const CompressibleState& s, const DeformationPack& pack);

/// The same nonlinearity assembled term by term from its expansion around the
/// rest state, including the second-order pressure remainder.
Spectrum n2_term(const CompressibleState& s, const DeformationPack& pack,
                 bool quadrature_remainder = false);
Spectrum n2_term(const CompressibleState& s);

void step_compressible(CompressibleState& s, const SchemeConfig& cfg, double dt);
double step_compressible(CompressibleState& s, const SchemeConfig& cfg);

struct CompressibleEnergy {
  double kinetic;    // rho_bar ||u||_0^2
  double potential;  // rho_bar int int_{rho_bar/4}^{rho_bar/J} P(z)/z^2 dz dy
  double potential_excess;  // the same integral with lower limit rho_bar
  double elastic;    // kappa ||grad eta||_0^2
  double total;      // kinetic + 2 potential + elastic
  double excess;     // total minus its rest-state value; nonnegative
  double dissipation;  // mu ||sqrt(J) grad_A u||^2 + lambda ||sqrt(J) div_A u||^2
};

CompressibleEnergy compressible_energy(const CompressibleState& s, const DeformationPack& pack);
CompressibleEnergy compressible_energy(const CompressibleState& s);

/// ||(J_b - J_a)/dt - ((J div_A u)_a + (J div_A u)_b)/2||_0.
double kinematic_residual(const CompressibleState& a, const CompressibleState& b);

}  // namespace visco
