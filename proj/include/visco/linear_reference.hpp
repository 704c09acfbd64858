#pragma once

#include <array>

#include "visco/compressible.hpp"
#include "visco/incompressible.hpp"
#include "visco/kernels.hpp"

namespace visco {

/// Roots of rho s^2 + visc a s + stiff a = 0 for a = |k|^2.
struct CharacteristicRoots {
  Complex s1, s2;
  bool repeated = false;
};

CharacteristicRoots characteristic_roots(double rho, double visc, double stiff, double a);

/// Exact evolution of one damped oscillator mode rho x'' + visc a x' + stiff a x = 0
/// (a = 0 gives free drift).
struct ModeEvolution {
  Complex eta, u;
};
ModeEvolution evolve_mode(const CharacteristicRoots& r, double a, Complex eta0, Complex u0,
                          double t);

struct ModeSolution {
  std::array<int, 3> k{};
  CharacteristicRoots transverse;
  CharacteristicRoots longitudinal;
  /// Unit vector k/|k| followed by two transverse unit vectors.
  std::array<std::array<double, 3>, 3> basis{};
};

ModeSolution mode_solution(std::array<int, 3> k, const kernels::StiffCoefficients& c);

struct LinearState {
  Spectrum eta, u;
};

/// Closed form of the pressureless linear problem. Requires div eta0 = div u0 = 0
/// to div_tol (relative to the H^1 norms); throws NotDivergenceFree otherwise.
LinearState solve_linear_incompressible(const Spectrum& eta0, const Spectrum& u0, double t,
                                        const FlowParams& p, double div_tol = 1e-10);

/// Closed form of the linearized compressible problem (Helmholtz split per mode).
LinearState solve_linear_compressible(const Spectrum& eta0, const Spectrum& u0, double t,
                                      const CompressibleParams& p);

/// Modewise evaluation for arbitrary stiff coefficients.
LinearState solve_linear(const Spectrum& eta0, const Spectrum& u0, double t,
                         const kernels::StiffCoefficients& c);

/// eta_r = -grad Lap^{-1} div eta0.
Spectrum stokes_corrector_eta(const Spectrum& eta0);
/// u_r = grad Lap^{-1} div_At u0 at the initial geometry.
Spectrum stokes_corrector_u(const DeformationPack& pack0, const Spectrum& u0);

struct AdjustedData {
  Spectrum eta, u;
  Spectrum eta_r, u_r;
  double eta_r_h3;          // ||eta_r||_3
  double grad_eta0_h2_sq;   // ||grad eta0||_2^2
  double u_r_h2;            // ||u_r||_2
  double grad_eta0_u0;      // ||grad eta0||_2 ||u0||_2
  double residual_div_eta;  // ||div(eta0 + eta_r)||_0
  double residual_div_u;    // ||div(u0 + u_r)||_0
};

/// Initial data of the linear problem: (eta0 + eta_r, u0 + u_r).
AdjustedData build_adjusted_initial_data(const Spectrum& eta0, const Spectrum& u0,
                                         const DeformationPack& pack0);

}  // namespace visco
