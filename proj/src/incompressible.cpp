#include "visco/incompressible.hpp"

#include <algorithm>
#include <cmath>

#include "visco/errors.hpp"
#include "visco/kernels.hpp"
#include "visco/spectral/fft.hpp"
#include "visco/spectral/operators.hpp"

namespace visco {

void FlowParams::validate() const {
  if (!(rho > 0 && mu > 0 && kappa > 0)) {
    throw ConfigError("rho, mu and kappa must be positive");
  }
}

void SchemeConfig::validate() const {
  if (!(dt_max > 0)) throw ConfigError("dt must be positive");
  if (!(cfl > 0)) throw ConfigError("cfl must be positive");
  if (order != 1 && order != 2) throw ConfigError("order must be 1 or 2");
  if (!(proj_tol > 0)) throw ConfigError("proj_tol must be positive");
  if (max_picard < 1) throw ConfigError("max_picard must be at least 1");
  if (!(vol_tol > 0)) throw ConfigError("vol_tol must be positive");
}

DeformationPack incompressible_pack(const Spectrum& eta, double j_floor) {
  return build_pack(eta, {.j_floor = j_floor, .unit_jacobian = true});
}

namespace {

double l2(const Spectrum& f) { return sobolev_norm(f, 0); }

void remove_mean(Spectrum& f) {
  for (int c = 0; c < f.comps(); ++c) f.comp(c)[0] = 0.0;
}

// mu (Lap_A - Lap) u, split as in the N1 term.
Spectrum viscous_remainder(const DeformationPack& pack, const Spectrum& u, double mu) {
  Spectrum v = atilde_divergence(pack, a_gradient(pack, u));
  v += divergence(atilde_gradient(pack, u));
  v *= mu;
  return v;
}

double jacobian_deviation(const DeformationPack& p) {
  return std::max(p.max_jac - 1.0, 1.0 - p.min_jac);
}

kernels::StiffCoefficients stiff(const FlowParams& p) {
  return {p.rho, p.mu, p.kappa, p.mu, p.kappa};
}

// Pulls the geometry back onto det(I + grad eta) = 1 with a gradient
// correction grad_A psi, Lap_A psi = 1 - J (Newton on the volume constraint).
DeformationPack correct_volume(DeformationPack pack, const SchemeConfig& cfg) {
  double dev = jacobian_deviation(pack);
  for (int it = 0; it < 3 && dev > 1e-2 * cfg.vol_tol; ++it) {
    Spectrum defect = -1.0 * pack.jac;
    defect.comp(0)[0] = 0.0;
    PressureSolve ps = pressure_solve(pack, defect, 1e-6, cfg.max_picard);
    DeformationPack next = incompressible_pack(pack.eta + a_gradient(pack, ps.q), cfg.j_floor);
    const double next_dev = jacobian_deviation(next);
    if (!(next_dev < dev)) break;
    pack = std::move(next);
    if (next_dev > 0.5 * dev) break;
    dev = next_dev;
  }
  return pack;
}

struct SubstepResult {
  Spectrum eta, u, q;
  DeformationPack pack;
  int pressure_iters;
};

// One predictor/projection cycle. `forcing` already holds the explicit terms
// except the pressure; q_old enters through grad_A at the given geometry.
SubstepResult advance(const FlowState& s, const SchemeConfig& cfg, double dt, int order,
                      const Spectrum& explicit_term, const DeformationPack& pressure_pack) {
  const FlowParams& p = s.params;
  Spectrum forcing = explicit_term - a_gradient(pressure_pack, s.q);

  Spectrum eta_star = s.eta;
  Spectrum u_star = s.u;
  kernels::implicit_mode_solve(stiff(p), dt, order, eta_star, u_star, forcing);

  SubstepResult out;
  out.pack = correct_volume(incompressible_pack(eta_star, cfg.j_floor), cfg);
  Projection proj = project_velocity(out.pack, u_star, dt, p.rho, cfg.proj_tol, cfg.max_picard);
  out.eta = out.pack.eta;
  out.u = std::move(proj.u);
  out.q = s.q + proj.q;
  out.pressure_iters = proj.iterations;
  return out;
}

}  // namespace

DeformationPack current_pack(const FlowState& s, double j_floor) {
  const bool cached = s.geometry && s.geometry->eta.data().size() == s.eta.data().size() &&
                      std::equal(s.geometry->eta.data().begin(), s.geometry->eta.data().end(),
                                 s.eta.data().begin());
  return cached ? *s.geometry : incompressible_pack(s.eta, j_floor);
}

Spectrum n1_term(const FlowState& s, const DeformationPack& pack) {
  Spectrum n = viscous_remainder(pack, s.u, s.params.mu);
  n -= atilde_gradient(pack, s.q);
  return n;
}

Spectrum n1_term(const FlowState& s) { return n1_term(s, incompressible_pack(s.eta)); }

PressureSolve pressure_solve(const DeformationPack& pack, const Spectrum& rhs, double tol,
                             int max_iter) {
  PressureSolve out;
  out.q = Spectrum(rhs.grid(), 1);
  Spectrum b = rhs;
  remove_mean(b);
  const double bnorm = l2(b);
  if (bnorm == 0.0) return out;
  for (int m = 0;; ++m) {
    Spectrum r = b - a_laplacian(pack, out.q);
    remove_mean(r);
    out.residual = l2(r) / bnorm;
    out.history.push_back(out.residual);
    out.iterations = m;
    if (out.residual <= tol) return out;
    // a residual 1e6 times the data means the iteration is not contracting
    if (m == max_iter || !std::isfinite(out.residual) || out.residual > 1e6) {
      throw NoConvergence(m, out.residual);
    }
    out.q += inverse_laplacian(r);
  }
}

Projection project_velocity(const DeformationPack& pack, const Spectrum& u_star, double dt,
                            double rho, double proj_tol, int max_iter) {
  Projection out{u_star, Spectrum(u_star.grid(), 1), 0};
  Spectrum div = a_divergence(pack, u_star);
  remove_mean(div);
  const double dnorm = l2(div);
  if (dnorm == 0.0) return out;
  const double target = 0.5 * proj_tol * std::min(1.0, std::sqrt(gradient_power_squared(u_star, 1)));
  if (dnorm <= target) return out;
  const double tol = std::max(target / dnorm, 1e-13);
  PressureSolve ps = pressure_solve(pack, (rho / dt) * div, tol, max_iter);
  out.u.axpy(-dt / rho, a_gradient(pack, ps.q));
  out.q = std::move(ps.q);
  out.iterations = ps.iterations;
  return out;
}

double velocity_gradient_sup(const Spectrum& u) { return backward(gradient(u)).max_abs(); }

double choose_dt(const FlowState& s, const SchemeConfig& cfg) {
  if (cfg.fixed_dt) return cfg.dt_max;
  return std::min(cfg.dt_max, cfg.cfl / (velocity_gradient_sup(s.u) + 1.0));
}

void step(FlowState& s, const SchemeConfig& cfg, double dt) {
  if (!(dt > 0)) throw ConfigError("dt must be positive");
  const DeformationPack pack = current_pack(s, cfg.j_floor);
  Spectrum g_now = viscous_remainder(pack, s.u, s.params.mu);

  SubstepResult r;
  if (cfg.order == 1) {
    r = advance(s, cfg, dt, 1, g_now, pack);
  } else if (!s.history) {
    // No history yet: two backward-Euler half steps.
    r = advance(s, cfg, 0.5 * dt, 1, g_now, pack);
    FlowState mid = s;
    mid.eta = r.eta;
    mid.u = r.u;
    mid.q = r.q;
    Spectrum g_mid = viscous_remainder(r.pack, mid.u, s.params.mu);
    r = advance(mid, cfg, 0.5 * dt, 1, g_mid, r.pack);
  } else {
    const SchemeHistory& h = *s.history;
    Spectrum ext = g_now;
    const double w = 0.5 * dt / h.dt_prev;
    ext.axpy(w, g_now);
    ext.axpy(-w, h.explicit_prev);
    Spectrum eta_half = s.eta;
    eta_half.axpy(0.5 * dt, s.u);
    const DeformationPack half = incompressible_pack(eta_half, cfg.j_floor);
    r = advance(s, cfg, dt, 2, ext, half);
  }

  const double dev = jacobian_deviation(r.pack);
  if (dev > cfg.vol_tol) {
    throw StepRejected("|J - 1| = " + std::to_string(dev) + " exceeds vol_tol at t = " +
                       std::to_string(s.t + dt));
  }
  if (!r.pack.valid) throw SingularMap(r.pack.min_jac);

  if (cfg.order == 2) s.history = SchemeHistory{std::move(g_now), dt};
  s.eta = std::move(r.eta);
  s.geometry = std::make_shared<const DeformationPack>(std::move(r.pack));
  s.u = std::move(r.u);
  s.q = std::move(r.q);
  remove_mean(s.q);
  s.t += dt;
  s.steps += 1;
  s.last_pressure_iters = r.pressure_iters;
}

double step(FlowState& s, const SchemeConfig& cfg) {
  const double dt = choose_dt(s, cfg);
  step(s, cfg, dt);
  return dt;
}

InitialData make_initial_data(const Grid& g, EtaKind kind, const std::vector<Shear>& shears,
                              const Spectrum& u_spec, double proj_tol) {
  InitialData d;
  d.eta0 = make_volume_preserving_eta(g, kind, shears);
  const DeformationPack pack = incompressible_pack(d.eta0);
  Projection p = project_velocity(pack, u_spec, 1.0, 1.0, proj_tol, 200);
  d.u0 = std::move(p.u);
  d.pressure_iterations = p.iterations;
  return d;
}

FlowState make_state(const InitialData& d, const FlowParams& p) {
  p.validate();
  FlowState s;
  s.eta = d.eta0;
  s.u = d.u0;
  s.q = Spectrum(d.u0.grid(), 1);
  s.params = p;
  return s;
}

double kappa_threshold(double i0h, double c1, double c2) {
  if (!(c1 >= 1.0) || !(c2 > 0.0 && c2 <= 1.0)) {
    throw ConfigError("kappa_threshold needs c1 >= 1 and 0 < c2 <= 1");
  }
  if (i0h < 0) throw ConfigError("I0h must be nonnegative");
  const double a = 2.0 * std::sqrt(c1 * i0h);
  const double b = std::pow(4.0 * c1 * i0h, 2);
  return std::max(a, b) / c2;
}

}  // namespace visco
