#include <cmath>

#include "doctest.h"
#include "test_util.hpp"
#include "visco/errors.hpp"
#include "visco/linear_reference.hpp"
#include "visco/spectral/operators.hpp"

using namespace visco;
using namespace visco::testing;

namespace {

double quadratic_residual(double rho, double visc, double stiff, double a, Complex s) {
  return std::abs(rho * s * s + visc * a * s + stiff * a);
}

}  // namespace

TEST_CASE("characteristic roots") {
  auto r = characteristic_roots(1, 1, 1, 1);
  CHECK(r.s1.real() == doctest::Approx(-0.5));
  CHECK(std::abs(r.s1.imag()) == doctest::Approx(std::sqrt(3.0) / 2));
  CHECK(r.s2 == std::conj(r.s1));

  r = characteristic_roots(1, 4, 1, 1);
  const double lo = std::min(r.s1.real(), r.s2.real()), hi = std::max(r.s1.real(), r.s2.real());
  CHECK(lo == doctest::Approx(-2 - std::sqrt(3.0)));
  CHECK(hi == doctest::Approx(-2 + std::sqrt(3.0)));

  // longitudinal compressible example: s^2 + 2 s + 2 = 0
  r = characteristic_roots(1, 2, 2, 1);
  CHECK(r.s1.real() == doctest::Approx(-1.0));
  CHECK(std::abs(r.s1.imag()) == doctest::Approx(1.0));

  for (double rho : {0.5, 1.0, 3.0}) {
    for (double visc : {0.1, 1.0, 7.0}) {
      for (double stiff : {0.2, 2.0, 50.0}) {
        for (double a : {1.0, 2.0, 9.0, 48.0}) {
          auto q = characteristic_roots(rho, visc, stiff, a);
          const double scale = rho * std::norm(q.s1) + visc * a * std::abs(q.s1) + stiff * a;
          CHECK(quadratic_residual(rho, visc, stiff, a, q.s1) <= 1e-12 * scale);
          CHECK(quadratic_residual(rho, visc, stiff, a, q.s2) <= 1e-12 * scale);
          CHECK(q.s1.real() < 0);
          CHECK(q.s2.real() < 0);
        }
      }
    }
  }
}

TEST_CASE("repeated roots are continuous with nearby distinct roots") {
  // mu^2 |k|^2 = 4 rho kappa at mu = 2, rho = kappa = 1, |k| = 1.
  auto rep = characteristic_roots(1, 2, 1, 1);
  CHECK(rep.repeated);
  const Complex e0(0.3, -0.1), u0(-0.7, 0.2);
  for (double t : {0.1, 1.0, 5.0}) {
    auto a = evolve_mode(rep, 1, e0, u0, t);
    auto b = evolve_mode(characteristic_roots(1, 2.0 * (1 + 1e-6), 1, 1), 1, e0, u0, t);
    auto c = evolve_mode(characteristic_roots(1, 2.0 * (1 - 1e-6), 1, 1), 1, e0, u0, t);
    CHECK(std::abs(a.eta - b.eta) < 1e-5);
    CHECK(std::abs(a.eta - c.eta) < 1e-5);
    CHECK(std::abs(a.u - b.u) < 1e-5);
  }
  // Just outside the switch, both branches agree closely.
  const double mu_edge = 2.0 * std::sqrt(1 + 4e-9);
  auto near = characteristic_roots(1, mu_edge, 1, 1);
  CHECK_FALSE(near.repeated);
  auto a = evolve_mode(rep, 1, e0, u0, 2.0);
  auto b = evolve_mode(near, 1, e0, u0, 2.0);
  CHECK(std::abs(a.eta - b.eta) < 1e-8);
}

TEST_CASE("zero mode drifts freely") {
  Grid g = Grid::cube(8);
  Spectrum eta(g, 3), u(g, 3);
  eta.comp(0)[0] = 0.5;
  u.comp(0)[0] = 0.2;
  u.comp(2)[0] = -0.1;
  auto s = solve_linear_incompressible(eta, u, 3.0, {});
  CHECK(s.eta.mean(0) == doctest::Approx(1.1));
  CHECK(s.eta.mean(2) == doctest::Approx(-0.3));
  CHECK(s.u.mean(0) == 0.2);
}

TEST_CASE("single mode decays at the closed-form rate") {
  Grid g = Grid::cube(8);
  Spectrum u = sample_spectrum(g, 3, [](double, double b, double, std::span<double> o) {
    o[0] = std::sin(b);
    o[1] = o[2] = 0;
  });
  Spectrum eta(g, 3);
  auto s = solve_linear_incompressible(eta, u, 4.0, {});
  // eta = (2/sqrt3) e^{-t/2} sin(sqrt3 t / 2) sin(y2)
  const double w = std::sqrt(3.0) / 2;
  const double expect = std::exp(-2.0) * std::sin(w * 4.0) / w;
  CHECK(s.eta.mode(0, 0, 1, 0).imag() == doctest::Approx(-0.5 * expect));
}

TEST_CASE("divergence precondition") {
  Grid g = Grid::cube(8);
  Spectrum eta = sample_spectrum(g, 3, [](double a, double, double, std::span<double> o) {
    o[0] = std::sin(a);
    o[1] = o[2] = 0;
  });
  CHECK_THROWS_AS(solve_linear_incompressible(eta, Spectrum(g, 3), 1.0, {}), NotDivergenceFree);
  CHECK_NOTHROW(solve_linear_compressible(eta, Spectrum(g, 3), 1.0, {}));
}

TEST_CASE("compressible closed form") {
  Grid g = Grid::cube(8);
  Spectrum u = leray_project(random_band_limited(g, 3, 2, 1.0, 1, false));
  Spectrum eta = leray_project(random_band_limited(g, 3, 2, 1.0, 2, false));
  CompressibleParams cp{1.3, 0.7, 2.0, 1.5, PressureLaw(1.0, 1.4, 1.3)};
  FlowParams fp{1.3, 0.7, 1.5};
  auto a = solve_linear_compressible(eta, u, 1.7, cp);
  auto b = solve_linear_incompressible(eta, u, 1.7, fp);
  CHECK(max_abs_diff(a.eta, b.eta) < 1e-13);
  CHECK(max_abs_diff(a.u, b.u) < 1e-13);

  // longitudinal mode with s^2 + 2s + 2 = 0: eta = e^{-t} sin t for eta0 = 0, u0 = 1
  CompressibleParams lp{1.0, 1.0, 1.0, 1.0, PressureLaw(1.0, 1.0, 1.0)};
  Spectrum ul = sample_spectrum(g, 3, [](double x, double, double, std::span<double> o) {
    o[0] = std::sin(x);
    o[1] = o[2] = 0;
  });
  auto c = solve_linear_compressible(Spectrum(g, 3), ul, 2.0, lp);
  CHECK(c.eta.mode(0, 1, 0, 0).imag() == doctest::Approx(-0.5 * std::exp(-2.0) * std::sin(2.0)));
}

TEST_CASE("closed form solves the PDE, superposes and dissipates") {
  Grid g = Grid::cube(8);
  FlowParams p{1.2, 0.6, 2.5};
  Spectrum u0 = leray_project(random_band_limited(g, 3, 3, 1.0, 3, false));
  Spectrum e0 = leray_project(random_band_limited(g, 3, 3, 1.0, 4, false));
  const double t = 0.8, h = 1e-4;
  auto m = solve_linear_incompressible(e0, u0, t - h, p);
  auto c = solve_linear_incompressible(e0, u0, t, p);
  auto pl = solve_linear_incompressible(e0, u0, t + h, p);
  Spectrum eta_t = (0.5 / h) * (pl.eta - m.eta);
  Spectrum u_t = (0.5 / h) * (pl.u - m.u);
  CHECK(sobolev_norm(eta_t - c.u, 0) < 1e-6 * sobolev_norm(c.u, 0));
  Spectrum res = p.rho * u_t - p.mu * laplacian(c.u) - p.kappa * laplacian(c.eta);
  CHECK(sobolev_norm(res, 0) < 1e-5 * sobolev_norm(p.kappa * laplacian(c.eta), 0));

  Spectrum u1 = leray_project(random_band_limited(g, 3, 3, 1.0, 5, false));
  auto a = solve_linear_incompressible(e0, u0, t, p);
  auto b = solve_linear_incompressible(Spectrum(g, 3), u1, t, p);
  auto ab = solve_linear_incompressible(e0, u0 + u1, t, p);
  CHECK(max_abs_diff(ab.u, a.u + b.u) < 1e-12);
  CHECK(max_abs_diff(ab.eta, a.eta + b.eta) < 1e-12);

  double prev = INFINITY;
  for (int n = 0; n <= 40; ++n) {
    auto s = solve_linear_incompressible(e0, u0, 0.1 * n, p);
    const double e = p.rho * sobolev_norm_squared(s.u, 0) + p.kappa * gradient_power_squared(s.eta, 1);
    CHECK(e <= prev + 1e-10);
    prev = e;
  }
}

TEST_CASE("Stokes corrector for the displacement") {
  Grid g = Grid::cube(16);
  Spectrum sol = leray_project(random_band_limited(g, 3, 3, 1.0, 6, false));
  CHECK(max_abs(stokes_corrector_eta(sol)) < 1e-15);

  Spectrum e = sample_spectrum(g, 3, [](double a, double, double, std::span<double> o) {
    o[0] = std::sin(a);
    o[1] = o[2] = 0;
  });
  CHECK(max_abs_diff(stokes_corrector_eta(e), -1.0 * e) < 1e-15);

  for (unsigned seed = 0; seed < 5; ++seed) {
    Spectrum eta0 = random_band_limited(g, 3, 4, 0.1, 30 + seed);
    Spectrum r = stokes_corrector_eta(eta0);
    CHECK(sobolev_norm(divergence(eta0 + r), 0) <= 1e-12);
    for (int c = 0; c < 3; ++c) CHECK(r.mean(c) == 0.0);
  }
}

TEST_CASE("Stokes corrector for the velocity") {
  Grid g = Grid::cube(16);
  Spectrum u0 = random_band_limited(g, 3, 3, 1.0, 7);
  CHECK(max_abs(stokes_corrector_u(incompressible_pack(Spectrum(g, 3)), u0)) < 1e-15);

  auto shear = [&](double a) {
    return make_volume_preserving_eta(g, EtaKind::Shear, {Shear{0, 1, a, 1, 0}});
  };
  const double r1 = sobolev_norm(stokes_corrector_u(incompressible_pack(shear(0.02)), u0), 2);
  const double r2 = sobolev_norm(stokes_corrector_u(incompressible_pack(shear(0.01)), u0), 2);
  CHECK(r1 / r2 == doctest::Approx(2.0).epsilon(0.02));

  auto d = make_initial_data(g, EtaKind::ComposedShears,
                             {Shear{0, 1, 0.1, 1, 0.2}, Shear{2, 0, 0.1, 1, 0.4}}, u0);
  auto adj = build_adjusted_initial_data(d.eta0, d.u0, incompressible_pack(d.eta0));
  CHECK(adj.residual_div_u <= 1e-9);
  CHECK(adj.residual_div_eta <= 1e-12);
  CHECK(adj.u_r_h2 / adj.grad_eta0_u0 <= 10.0);
  CHECK(adj.eta_r_h3 / adj.grad_eta0_h2_sq <= 10.0);
}
