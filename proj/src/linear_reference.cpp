#include "visco/linear_reference.hpp"

#include <cmath>

#include "visco/errors.hpp"
#include "visco/kernels.hpp"
#include "visco/spectral/operators.hpp"

namespace visco {

CharacteristicRoots characteristic_roots(double rho, double visc, double stiff, double a) {
  const double b = visc * a, c = stiff * a;
  const double disc = b * b - 4.0 * rho * c;
  CharacteristicRoots r;
  if (std::abs(disc) <= 1e-9 * (b * b + 4.0 * rho * c)) {
    r.repeated = true;
    r.s1 = r.s2 = Complex(-b / (2.0 * rho), 0.0);
  } else if (disc > 0) {
    // Stable form of the quadratic formula.
    const double q = -0.5 * (b + std::sqrt(disc));
    r.s1 = Complex(q / rho, 0.0);
    r.s2 = Complex(q != 0.0 ? c / q : 0.0, 0.0);
  } else {
    const double im = std::sqrt(-disc) / (2.0 * rho);
    r.s1 = Complex(-b / (2.0 * rho), im);
    r.s2 = Complex(-b / (2.0 * rho), -im);
  }
  return r;
}

ModeEvolution evolve_mode(const CharacteristicRoots& r, double a, Complex eta0, Complex u0,
                          double t) {
  if (a == 0.0) return {eta0 + u0 * t, u0};
  if (r.repeated) {
    const Complex s = r.s1;
    const Complex e = std::exp(s * t);
    const Complex c2 = u0 - s * eta0;
    return {(eta0 + c2 * t) * e, (c2 + s * (eta0 + c2 * t)) * e};
  }
  const Complex d = r.s1 - r.s2;
  const Complex ca = (u0 - r.s2 * eta0) / d;
  const Complex cb = (r.s1 * eta0 - u0) / d;
  const Complex e1 = std::exp(r.s1 * t), e2 = std::exp(r.s2 * t);
  return {ca * e1 + cb * e2, ca * r.s1 * e1 + cb * r.s2 * e2};
}

ModeSolution mode_solution(std::array<int, 3> k, const kernels::StiffCoefficients& c) {
  ModeSolution m;
  m.k = k;
  const double a = double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2];
  m.transverse = characteristic_roots(c.rho, c.visc_transverse, c.stiff_transverse, a);
  m.longitudinal = characteristic_roots(c.rho, c.visc_longitudinal, c.stiff_longitudinal, a);
  if (a == 0.0) {
    m.basis = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    return m;
  }
  const double n = std::sqrt(a);
  std::array<double, 3> l{k[0] / n, k[1] / n, k[2] / n};
  // Pick the coordinate axis least aligned with k to seed the transverse pair.
  int ax = 0;
  for (int d = 1; d < 3; ++d) {
    if (std::abs(l[d]) < std::abs(l[ax])) ax = d;
  }
  std::array<double, 3> e{0, 0, 0};
  e[ax] = 1.0;
  std::array<double, 3> t1{e[0] - l[ax] * l[0], e[1] - l[ax] * l[1], e[2] - l[ax] * l[2]};
  const double tn = std::sqrt(t1[0] * t1[0] + t1[1] * t1[1] + t1[2] * t1[2]);
  for (double& v : t1) v /= tn;
  std::array<double, 3> t2{l[1] * t1[2] - l[2] * t1[1], l[2] * t1[0] - l[0] * t1[2],
                           l[0] * t1[1] - l[1] * t1[0]};
  m.basis = {l, t1, t2};
  return m;
}

LinearState solve_linear(const Spectrum& eta0, const Spectrum& u0, double t,
                         const kernels::StiffCoefficients& c) {
  const Grid& g = u0.grid();
  LinearState out{eta0, u0};
  const std::size_t nm = g.modes();
  Complex* pe = out.eta.data().data();
  Complex* pu = out.u.data().data();
  kernels::for_each_mode(g, kernels::Exec::Parallel, [&](std::size_t m, kernels::ModeK k) {
    const double a = k.norm2();
    const auto rt = characteristic_roots(c.rho, c.visc_transverse, c.stiff_transverse, a);
    if (a == 0.0) {
      for (int d = 0; d < 3; ++d) {
        auto r = evolve_mode(rt, 0.0, pe[d * nm + m], pu[d * nm + m], t);
        pe[d * nm + m] = r.eta;
        pu[d * nm + m] = r.u;
      }
      return;
    }
    const auto rl = characteristic_roots(c.rho, c.visc_longitudinal, c.stiff_longitudinal, a);
    const double n = std::sqrt(a);
    const double kh[3] = {k.k1 / n, k.k2 / n, k.k3 / n};
    Complex eL = 0.0, uL = 0.0;
    for (int d = 0; d < 3; ++d) {
      eL += kh[d] * pe[d * nm + m];
      uL += kh[d] * pu[d * nm + m];
    }
    const auto L = evolve_mode(rl, a, eL, uL, t);
    for (int d = 0; d < 3; ++d) {
      const auto T = evolve_mode(rt, a, pe[d * nm + m] - kh[d] * eL, pu[d * nm + m] - kh[d] * uL, t);
      pe[d * nm + m] = T.eta + kh[d] * L.eta;
      pu[d * nm + m] = T.u + kh[d] * L.u;
    }
  });
  return out;
}

LinearState solve_linear_incompressible(const Spectrum& eta0, const Spectrum& u0, double t,
                                        const FlowParams& p, double div_tol) {
  auto check = [&](const Spectrum& f, const char* name) {
    const double d = sobolev_norm(divergence(f), 0);
    const double scale = std::max(sobolev_norm(f, 1), 1e-300);
    if (d > div_tol * scale && d > 1e-300) {
      throw NotDivergenceFree(std::string(name) + " is not divergence free (||div|| = " +
                              std::to_string(d) + "); apply the Stokes correctors first");
    }
  };
  check(eta0, "eta0");
  check(u0, "u0");
  return solve_linear(eta0, u0, t, {p.rho, p.mu, p.kappa, p.mu, p.kappa});
}

LinearState solve_linear_compressible(const Spectrum& eta0, const Spectrum& u0, double t,
                                      const CompressibleParams& p) {
  const double pl = p.pressure.dp(p.rho_bar) * p.rho_bar;
  return solve_linear(eta0, u0, t, {p.rho_bar, p.mu, p.kappa, p.mu + p.lambda, p.kappa + pl});
}

namespace {

Spectrum zero_mean_inverse_laplacian(Spectrum f) {
  for (int c = 0; c < f.comps(); ++c) f.comp(c)[0] = 0.0;
  return inverse_laplacian(f);
}

}  // namespace

Spectrum stokes_corrector_eta(const Spectrum& eta0) {
  return -1.0 * gradient(zero_mean_inverse_laplacian(divergence(eta0)));
}

Spectrum stokes_corrector_u(const DeformationPack& pack0, const Spectrum& u0) {
  return gradient(zero_mean_inverse_laplacian(atilde_divergence(pack0, u0)));
}

AdjustedData build_adjusted_initial_data(const Spectrum& eta0, const Spectrum& u0,
                                         const DeformationPack& pack0) {
  AdjustedData d;
  d.eta_r = stokes_corrector_eta(eta0);
  d.u_r = stokes_corrector_u(pack0, u0);
  d.eta = eta0 + d.eta_r;
  d.u = u0 + d.u_r;
  d.eta_r_h3 = sobolev_norm(d.eta_r, 3);
  const Spectrum ge = gradient(eta0);
  d.grad_eta0_h2_sq = sobolev_norm_squared(ge, 2);
  d.u_r_h2 = sobolev_norm(d.u_r, 2);
  d.grad_eta0_u0 = sobolev_norm(ge, 2) * sobolev_norm(u0, 2);
  d.residual_div_eta = sobolev_norm(divergence(d.eta), 0);
  d.residual_div_u = sobolev_norm(divergence(d.u), 0);
  return d;
}

}  // namespace visco
