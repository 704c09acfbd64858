#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "visco/kinematics.hpp"

namespace visco {

struct FlowParams {
  double rho = 1.0;
  double mu = 1.0;
  double kappa = 1.0;
  void validate() const;
};

struct SchemeConfig {
  /// Upper bound on the step; with fixed_dt the step is always dt_max.
  double dt_max = 1e-2;
  bool fixed_dt = false;
  double cfl = 0.5;
  int order = 2;
  double proj_tol = 1e-10;
  int max_picard = 50;
  double vol_tol = 1e-6;
  double j_floor = 0.1;
  void validate() const;
};

/// Explicit-term memory carried between steps of the order-2 scheme.
struct SchemeHistory {
  Spectrum explicit_prev;
  double dt_prev = 0.0;
};

struct FlowState {
  Spectrum eta;  // 3
  Spectrum u;    // 3
  Spectrum q;    // 1, zero mean
  double t = 0.0;
  FlowParams params;
  long steps = 0;
  int last_pressure_iters = 0;
  std::optional<SchemeHistory> history;
  /// Pack of the current eta, reused by the next step when eta is unchanged.
  std::shared_ptr<const DeformationPack> geometry;

  const Grid& grid() const { return u.grid(); }
};

/// Geometry used by incompressible runs (A taken as the cofactor matrix).
DeformationPack incompressible_pack(const Spectrum& eta, double j_floor = 0.1);

/// The cached geometry when it belongs to s.eta, otherwise a fresh pack.
DeformationPack current_pack(const FlowState& s, double j_floor = 0.1);

/// mu (div_At grad_A u + div grad_At u) - grad_At q, with At = A - I.
Spectrum n1_term(const FlowState& s, const DeformationPack& pack);
Spectrum n1_term(const FlowState& s);

struct PressureSolve {
  Spectrum q;
  int iterations = 0;
  double residual = 0.0;  // ||Lap_A q - rhs||_0 / ||rhs||_0
  std::vector<double> history;
};

/// Solves Lap_A q = rhs for zero-mean q by q <- q + Lap^{-1}(rhs - Lap_A q).
PressureSolve pressure_solve(const DeformationPack& pack, const Spectrum& rhs, double tol,
                             int max_iter);

struct Projection {
  Spectrum u;
  Spectrum q;
  int iterations = 0;
};

/// u = u_star - (dt/rho) grad_A q with Lap_A q = (rho/dt) div_A u_star, so that
/// ||div_A u||_0 <= proj_tol min(1, ||grad u_star||_0).
Projection project_velocity(const DeformationPack& pack, const Spectrum& u_star, double dt,
                            double rho, double proj_tol = 1e-10, int max_iter = 50);

double velocity_gradient_sup(const Spectrum& u);
double choose_dt(const FlowState& s, const SchemeConfig& cfg);

/// Advances s by one IMEX step of size dt. s is untouched if the step throws.
void step(FlowState& s, const SchemeConfig& cfg, double dt);
/// Same, with dt from the configured policy. Returns the step taken.
double step(FlowState& s, const SchemeConfig& cfg);

struct InitialData {
  Spectrum eta0;
  Spectrum u0;
  int pressure_iterations = 0;
};

/// eta0 from the shear recipe; u0 is u_spec projected against pack(eta0).
InitialData make_initial_data(const Grid& g, EtaKind kind, const std::vector<Shear>& shears,
                              const Spectrum& u_spec, double proj_tol = 1e-10);

FlowState make_state(const InitialData& d, const FlowParams& p);

/// (1/c2) max{2 sqrt(c1 i0h), (4 c1 i0h)^2}.
double kappa_threshold(double i0h, double c1 = 1.0, double c2 = 1.0);

}  // namespace visco
