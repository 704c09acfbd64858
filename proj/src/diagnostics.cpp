#include "visco/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "visco/spectral/fft.hpp"
#include "visco/spectral/operators.hpp"

namespace visco {

double i0h(const Spectrum& u, const Spectrum& eta, double kappa) {
  return sobolev_norm_squared(u, 2) + kappa * sobolev_norm_squared(gradient(eta), 2);
}

Vec3 volume_average(const Spectrum& v) { return {v.mean(0), v.mean(1), v.mean(2)}; }

Spectrum mean_free(const Spectrum& u) {
  Spectrum out = u;
  for (int c = 0; c < out.comps(); ++c) out.comp(c)[0] = 0.0;
  return out;
}

Straightening straightening(const Spectrum& eta) {
  const Field f = backward(eta);
  const Grid& g = f.grid();
  Straightening s;
  double sum = 0.0;
  for (int i3 = 0; i3 < g.n3; ++i3) {
    for (int i2 = 0; i2 < g.n2; ++i2) {
      for (int i1 = 0; i1 < g.n1; ++i1) {
        double m2 = 0.0;
        for (int c = 0; c < f.comps(); ++c) {
          const double d = f.at(c, i1, i2, i3) - f.at(c, i1, i2, 0);
          m2 += d * d;
        }
        sum += m2;
        s.sup = std::max(s.sup, std::sqrt(m2));
      }
    }
  }
  s.l2 = std::sqrt(sum * g.cell_volume());
  return s;
}

double drift_residual(const Spectrum& eta, const Vec3& u0_avg, const Vec3& varpi, double t,
                      int order) {
  Spectrum r = eta;
  for (int c = 0; c < 3; ++c) r.comp(c)[0] -= u0_avg[c] * t + varpi[c];
  return sobolev_norm(r, order);
}

namespace {

double third_order_eta(const Spectrum& eta) { return gradient_power_squared(eta, 3); }

}  // namespace

EnergyFunctionals energy_functionals(const FlowState& s, const DeformationPack& pack,
                                     const EnergyConstants& c) {
  const FlowParams& p = s.params;
  EnergyFunctionals e;
  const double base = p.rho * sobolev_norm_squared(s.u, 0) + p.kappa * gradient_power_squared(s.eta, 1);
  e.E = 0.5 * base;
  e.D = p.mu * sobolev_norm_squared(a_gradient(pack, s.u), 0);
  const double eta3 = third_order_eta(s.eta);
  e.E1 = c.c4 * (p.rho * gradient_power_squared(s.u, 2) + p.kappa * eta3) +
         p.rho * multi_index_inner(s.eta, s.u, 2) + 0.5 * p.mu * eta3;
  e.E2 = e.E1 + c.c5 * base;
  return e;
}

double compressible_energy_excess(const CompressibleState& s, const DeformationPack& pack) {
  return compressible_energy(s, pack).excess;
}

EnergyFunctionals energy_functionals(const CompressibleState& s, const DeformationPack& pack,
                                     const EnergyConstants& c) {
  const CompressibleParams& p = s.params;
  const CompressibleEnergy ce = compressible_energy(s, pack);
  EnergyFunctionals e;
  e.E = 0.5 * ce.excess;
  e.D = ce.dissipation;
  const double eta3 = third_order_eta(s.eta);
  const double div2 = gradient_power_squared(divergence(s.eta), 2);
  const double pr = p.pressure.dp(p.rho_bar) * p.rho_bar;
  e.E1 = c.c4 * (p.rho_bar * gradient_power_squared(s.u, 2) + pr * div2 + p.kappa * eta3) +
         p.rho_bar * multi_index_inner(s.eta, s.u, 2) + 0.5 * p.mu * eta3 + 0.5 * p.lambda * div2;
  e.E2 = e.E1 + c.c5 * ce.excess;
  return e;
}

DeviationNorms deviation_norms(const Spectrum& u, const Spectrum& eta, const Spectrum& u_lin,
                               const Spectrum& eta_lin, double kappa) {
  DeviationNorms d;
  d.u = sobolev_norm_squared(u - u_lin, 2);
  d.eta = kappa * sobolev_norm_squared(eta - eta_lin, 3);
  d.combined = d.u + d.eta;
  return d;
}

DiagnosticsReference make_reference(const Spectrum& eta0, const Spectrum& u0, double kappa,
                                    const EnergyConstants& c) {
  return {volume_average(u0), volume_average(eta0), kappa, c};
}

std::vector<std::string> DiagnosticsRecord::columns() {
  return {"t",          "u_h2",       "grad_eta_h2", "ubar_h2",    "stability", "E",
          "D",          "E1",         "E2",          "div_eta_h2", "etabar_l2", "etabar_sup",
          "drift_l2",   "drift_h3",   "pressure_iters", "min_j",  "max_j",     "piola",
          "u_mean_1",   "u_mean_2",   "u_mean_3"};
}

std::vector<double> DiagnosticsRecord::values() const {
  return {t,        u_h2,     grad_eta_h2, ubar_h2,    stability,  E,          D,
          E1,       E2,       div_eta_h2,  etabar_l2,  etabar_sup, drift_l2,   drift_h3,
          double(pressure_iters), min_j, max_j, piola, u_mean[0], u_mean[1], u_mean[2]};
}

namespace {

DiagnosticsRecord kinematic_part(double t, const Spectrum& eta, const Spectrum& u,
                                 const DeformationPack& pack, const DiagnosticsReference& ref) {
  DiagnosticsRecord r;
  r.t = t;
  r.u_h2 = sobolev_norm(u, 2);
  const Spectrum ge = gradient(eta);
  r.grad_eta_h2 = sobolev_norm(ge, 2);
  const Spectrum ub = mean_free(u);
  r.ubar_h2 = sobolev_norm(ub, 2);
  r.stability = std::sqrt(r.ubar_h2 * r.ubar_h2 + ref.kappa * r.grad_eta_h2 * r.grad_eta_h2);
  r.div_eta_h2 = sobolev_norm(divergence(eta), 2);
  const Straightening st = straightening(eta);
  r.etabar_l2 = st.l2;
  r.etabar_sup = st.sup;
  r.drift_l2 = drift_residual(eta, ref.u0_avg, ref.varpi, t, 0);
  r.drift_h3 = drift_residual(eta, ref.u0_avg, ref.varpi, t, 3);
  r.min_j = pack.min_jac;
  r.max_j = pack.max_jac;
  r.piola = piola_residual(pack);
  r.u_mean = volume_average(u);
  return r;
}

}  // namespace

DiagnosticsRecord record(const FlowState& s, const DiagnosticsReference& ref) {
  const DeformationPack pack = current_pack(s);
  DiagnosticsRecord r = kinematic_part(s.t, s.eta, s.u, pack, ref);
  const EnergyFunctionals e = energy_functionals(s, pack, ref.constants);
  r.E = e.E;
  r.D = e.D;
  r.E1 = e.E1;
  r.E2 = e.E2;
  r.pressure_iters = s.last_pressure_iters;
  return r;
}

DiagnosticsRecord record(const CompressibleState& s, const DiagnosticsReference& ref) {
  const DeformationPack pack = compressible_pack(s.eta);
  DiagnosticsRecord r = kinematic_part(s.t, s.eta, s.u, pack, ref);
  const EnergyFunctionals e = energy_functionals(s, pack, ref.constants);
  r.E = e.E;
  r.D = e.D;
  r.E1 = e.E1;
  r.E2 = e.E2;
  return r;
}

}  // namespace visco
