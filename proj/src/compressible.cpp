#include "visco/compressible.hpp"

#include <algorithm>
#include <cmath>

#include "visco/errors.hpp"
#include "visco/kernels.hpp"
#include "visco/spectral/fft.hpp"
#include "visco/spectral/operators.hpp"

namespace visco {

void CompressibleParams::validate() const {
  if (!(rho_bar > 0 && mu > 0 && kappa > 0)) {
    throw ConfigError("rho_bar, mu and kappa must be positive");
  }
  if (!(lambda >= mu / 3.0)) throw ConfigError("lambda must be at least mu/3");
}

DeformationPack compressible_pack(const Spectrum& eta, double j_floor) {
  return build_pack(eta, {.j_floor = j_floor, .unit_jacobian = false});
}

namespace {

// Pointwise map of a scalar spectrum on the product grid of the pack.
template <class F>
Field map_fine(const ProductSpace& ps, const Spectrum& f, F&& fn) {
  Field x = ps.lift(f);
  auto d = x.comp(0);
  kernels::for_each_index(d.size(), kernels::Exec::Parallel, [&](std::size_t i) { d[i] = fn(d[i]); });
  return x;
}

// Product of a scalar sampled on the product grid with every component of v.
Spectrum scale_fine(const ProductSpace& ps, const Field& w, const Spectrum& v) {
  Field x = ps.lift(v);
  const auto s = w.comp(0);
  for (int c = 0; c < x.comps(); ++c) {
    auto d = x.comp(c);
    kernels::for_each_index(d.size(), kernels::Exec::Parallel, [&](std::size_t i) { d[i] *= s[i]; });
  }
  return ps.restrict(x);
}

Spectrum pressure_of_density(const CompressibleState& s, const DeformationPack& pack) {
  const PressureLaw& law = s.params.pressure;
  const double rb = s.params.rho_bar;
  Field p = map_fine(pack.space, pack.jac, [&](double j) {
    const double tau = rb / j;
    law.check(tau);
    return law.p(tau);
  });
  return pack.space.restrict(p);
}

// kappa Lap eta + mu Lap u + lambda grad div u + P'(rho_bar) rho_bar grad div eta
Spectrum linear_part(const CompressibleState& s) {
  const CompressibleParams& p = s.params;
  Spectrum l = p.kappa * laplacian(s.eta);
  l.axpy(p.mu, laplacian(s.u));
  l.axpy(p.lambda, gradient(divergence(s.u)));
  l.axpy(p.pressure.dp(p.rho_bar) * p.rho_bar, gradient(divergence(s.eta)));
  return l;
}

kernels::StiffCoefficients stiff(const CompressibleParams& p) {
  return {p.rho_bar, p.mu, p.kappa, p.mu + p.lambda,
          p.kappa + p.pressure.dp(p.rho_bar) * p.rho_bar};
}

void check_pack(const DeformationPack& pack) {
  if (!pack.valid) throw SingularMap(pack.min_jac);
}

}  // namespace

Field density_field(const CompressibleState& s) {
  const DeformationPack pack = compressible_pack(s.eta);
  Field j = backward(pack.jac);
  for (double& v : j.data()) v = s.params.rho_bar / v;
  return j;
}

Spectrum n2_conservative(const CompressibleState& s, const DeformationPack& pack) {
  const CompressibleParams& p = s.params;
  const Field cof = pack.space.lift(pack.cof);
  Spectrum rhs = p.kappa * laplacian(s.eta);
  rhs.axpy(p.mu, weighted_divergence(pack.space, cof, a_gradient(pack, s.u)));
  rhs.axpy(p.lambda, weighted_gradient(pack.space, cof, a_divergence(pack, s.u)));
  rhs -= weighted_gradient(pack.space, cof, pressure_of_density(s, pack));
  rhs -= linear_part(s);
  return rhs;
}

Spectrum n2_term(const CompressibleState& s, const DeformationPack& pack,
                 bool quadrature_remainder) {
  const CompressibleParams& p = s.params;
  const PressureLaw& law = p.pressure;
  const double rb = p.rho_bar;
  const ProductSpace& ps = pack.space;

  Spectrum gu = a_gradient(pack, s.u);
  Spectrum du = a_divergence(pack, s.u);
  Spectrum n = p.mu * atilde_divergence(pack, gu);
  n.axpy(p.mu, divergence(atilde_gradient(pack, s.u)));
  n.axpy(p.lambda, atilde_gradient(pack, du));
  n.axpy(p.lambda, gradient(atilde_divergence(pack, s.u)));

  const Field jm1 = map_fine(ps, pack.jac, [](double j) { return j - 1.0; });
  Spectrum visc = p.mu * a_divergence(pack, gu);
  visc.axpy(p.lambda, a_gradient(pack, du));
  Spectrum pg = a_gradient(pack, pressure_of_density(s, pack));
  visc -= pg;
  n += scale_fine(ps, jm1, visc);
  n -= atilde_gradient(pack, pressure_of_density(s, pack));

  // P'(rho_bar) rho_bar (1/J - 1 + div eta) + R(rho_bar (1/J - 1))
  Field jinv = map_fine(ps, pack.jac, [](double j) { return 1.0 / j - 1.0; });
  Field rem(ps.fine(), 1);
  {
    auto src = jinv.comp(0);
    auto dst = rem.comp(0);
    kernels::for_each_index(src.size(), kernels::Exec::Parallel, [&](std::size_t i) {
      const double sv = rb * src[i];
      law.check(rb + sv);
      dst[i] = quadrature_remainder ? law.remainder_quadrature(sv) : law.remainder(sv);
    });
  }
  Spectrum scalar = (law.dp(rb) * rb) * (ps.restrict(jinv) + divergence(s.eta));
  scalar += ps.restrict(rem);
  n -= gradient(scalar);
  return n;
}

Spectrum n2_term(const CompressibleState& s) { return n2_term(s, compressible_pack(s.eta)); }

namespace {

struct Advance {
  Spectrum eta, u;
};

Advance advance(const CompressibleState& s, double dt, int order, const Spectrum& explicit_term) {
  Advance a{s.eta, s.u};
  kernels::implicit_mode_solve(stiff(s.params), dt, order, a.eta, a.u, explicit_term);
  return a;
}

Spectrum forcing(const CompressibleState& s, const DeformationPack& pack) {
  return n2_conservative(s, pack);
}

}  // namespace

void step_compressible(CompressibleState& s, const SchemeConfig& cfg, double dt) {
  if (!(dt > 0)) throw ConfigError("dt must be positive");
  const DeformationPack pack = compressible_pack(s.eta, cfg.j_floor);
  check_pack(pack);
  Spectrum f_now = forcing(s, pack);

  Advance r;
  if (cfg.order == 1) {
    r = advance(s, dt, 1, f_now);
  } else if (!s.history) {
    r = advance(s, 0.5 * dt, 1, f_now);
    CompressibleState mid = s;
    mid.eta = r.eta;
    mid.u = r.u;
    const DeformationPack mp = compressible_pack(mid.eta, cfg.j_floor);
    check_pack(mp);
    r = advance(mid, 0.5 * dt, 1, forcing(mid, mp));
  } else {
    const SchemeHistory& h = *s.history;
    Spectrum ext = f_now;
    const double w = 0.5 * dt / h.dt_prev;
    ext.axpy(w, f_now);
    ext.axpy(-w, h.explicit_prev);
    r = advance(s, dt, 2, ext);
  }
  check_pack(compressible_pack(r.eta, cfg.j_floor));

  if (cfg.order == 2) s.history = SchemeHistory{std::move(f_now), dt};
  s.eta = std::move(r.eta);
  s.u = std::move(r.u);
  s.t += dt;
  s.steps += 1;
}

double step_compressible(CompressibleState& s, const SchemeConfig& cfg) {
  double dt = cfg.dt_max;
  if (!cfg.fixed_dt) dt = std::min(cfg.dt_max, cfg.cfl / (velocity_gradient_sup(s.u) + 1.0));
  step_compressible(s, cfg, dt);
  return dt;
}

CompressibleEnergy compressible_energy(const CompressibleState& s, const DeformationPack& pack) {
  const CompressibleParams& p = s.params;
  const PressureLaw& law = p.pressure;
  const double rb = p.rho_bar;
  const ProductSpace& ps = pack.space;
  CompressibleEnergy e{};
  e.kinetic = rb * sobolev_norm_squared(s.u, 0);
  e.elastic = p.kappa * gradient_power_squared(s.eta, 1);

  const Field j = ps.lift(pack.jac);
  const Field gu = ps.lift(a_gradient(pack, s.u));
  const Field du = ps.lift(a_divergence(pack, s.u));
  const auto jv = j.comp(0);
  double pot = 0.0, pot_ex = 0.0, diss = 0.0;
  for (std::size_t i = 0; i < jv.size(); ++i) {
    const double tau = rb / jv[i];
    if (!(tau > law.lower())) {
      throw OutOfRange("density below the lower limit of the energy integral");
    }
    pot += law.potential(law.lower(), tau);
    pot_ex += law.potential(rb, tau);
    double g2 = 0.0;
    for (int c = 0; c < 9; ++c) g2 += gu.comp(c)[i] * gu.comp(c)[i];
    diss += jv[i] * (p.mu * g2 + p.lambda * du.comp(0)[i] * du.comp(0)[i]);
  }
  const double dv = ps.fine().cell_volume();
  e.potential = rb * pot * dv;
  e.dissipation = diss * dv;
  e.potential_excess = rb * pot_ex * dv;
  e.total = e.kinetic + 2.0 * e.potential + e.elastic;
  e.excess = e.kinetic + 2.0 * e.potential_excess + e.elastic;
  return e;
}

CompressibleEnergy compressible_energy(const CompressibleState& s) {
  return compressible_energy(s, compressible_pack(s.eta));
}

double kinematic_residual(const CompressibleState& a, const CompressibleState& b) {
  const double dt = b.t - a.t;
  if (!(dt > 0)) throw ConfigError("states must be in increasing time order");
  const DeformationPack pa = compressible_pack(a.eta), pb = compressible_pack(b.eta);
  // J div_A u = cof : grad u
  auto rate = [](const DeformationPack& p, const Spectrum& u) {
    const Field cof = p.space.lift(p.cof);
    const Field gu = p.space.lift(gradient(u));
    Field out(p.space.fine(), 1);
    auto d = out.comp(0);
    for (int c = 0; c < 9; ++c) {
      const auto x = cof.comp(c), y = gu.comp(c);
      for (std::size_t i = 0; i < d.size(); ++i) d[i] += x[i] * y[i];
    }
    return p.space.restrict(out);
  };
  Spectrum r = (1.0 / dt) * (pb.jac - pa.jac);
  r.axpy(-0.5, rate(pa, a.u));
  r.axpy(-0.5, rate(pb, b.u));
  return sobolev_norm(r, 0);
}

}  // namespace visco
