#include <cmath>

#include "doctest.h"
#include "test_util.hpp"
#include "visco/decay_fit.hpp"
#include "visco/diagnostics.hpp"
#include "visco/errors.hpp"
#include "visco/linear_reference.hpp"
#include "visco/spectral/operators.hpp"

using namespace visco;
using namespace visco::testing;

namespace {

const double kPi3 = M_PI * M_PI * M_PI;

Spectrum sin_y2_e1(const Grid& g) {
  return sample_spectrum(g, 3, [](double, double b, double, std::span<double> o) {
    o[0] = std::sin(b);
    o[1] = o[2] = 0;
  });
}

Spectrum shear(const Grid& g, double alpha) {
  return make_volume_preserving_eta(g, EtaKind::Shear, {Shear{0, 1, alpha, 1, 0}});
}

}  // namespace

TEST_CASE("I0h") {
  Grid g = Grid::cube(16);
  CHECK(i0h(Spectrum(g, 3), Spectrum(g, 3), 3.0) == 0.0);
  CHECK(i0h(sin_y2_e1(g), Spectrum(g, 3), 3.0) == doctest::Approx(12 * kPi3));
  CHECK(i0h(Spectrum(g, 3), shear(g, 0.3), 2.0) == doctest::Approx(2.0 * 0.09 * 12 * kPi3));
  Spectrum u = random_band_limited(g, 3, 3, 1.0, 1), e = random_band_limited(g, 3, 3, 0.1, 2);
  const double direct = std::pow(sobolev_norm(u, 2), 2) + 1.5 * std::pow(sobolev_norm(gradient(e), 2), 2);
  CHECK(std::abs(i0h(u, e, 1.5) - direct) <= 1e-12 * direct);
}

TEST_CASE("straightening") {
  Grid g = Grid::cube(16);
  Spectrum flat = sample_spectrum(g, 3, [](double a, double b, double, std::span<double> o) {
    o[0] = std::sin(a + b);
    o[1] = std::cos(2 * a);
    o[2] = 0.3;
  });
  auto s = straightening(flat);
  CHECK(s.l2 < 1e-13);
  CHECK(s.sup < 1e-13);

  Spectrum z = sample_spectrum(g, 3, [](double, double, double c, std::span<double> o) {
    o[0] = o[1] = 0;
    o[2] = std::sin(c);
  });
  s = straightening(z);
  CHECK(s.sup == doctest::Approx(1.0));
  CHECK(s.l2 == doctest::Approx(2 * std::pow(M_PI, 1.5)));

  Spectrum e = random_band_limited(g, 3, 3, 1.0, 3);
  auto a = straightening(e), b = straightening(e + flat);
  CHECK(a.l2 == doctest::Approx(b.l2).epsilon(1e-12));
  CHECK(a.sup == doctest::Approx(b.sup).epsilon(1e-12));
}

TEST_CASE("drift residual") {
  Grid g = Grid::cube(16);
  Spectrum c(g, 3);
  c.comp(0)[0] = 0.4;
  c.comp(1)[0] = -0.2;
  const Vec3 varpi = volume_average(c);
  CHECK(drift_residual(c, {0, 0, 0}, varpi, 7.0) == 0.0);
  Spectrum moved = c;
  moved.comp(2)[0] = 0.25 * 3.0;
  CHECK(drift_residual(moved, {0, 0, 0.25}, varpi, 3.0) < 1e-15);

  Spectrum e0 = leray_project(random_band_limited(g, 3, 2, 0.1, 4, false));
  FlowParams p{1.0, 2.5, 1.0};
  double prev = drift_residual(e0, {0, 0, 0}, {0, 0, 0}, 0.0);
  for (double t : {1.0, 2.0, 4.0}) {
    auto lin = solve_linear_incompressible(e0, Spectrum(g, 3), t, p);
    const double r = drift_residual(lin.eta, {0, 0, 0}, {0, 0, 0}, t);
    CHECK(r == doctest::Approx(sobolev_norm(lin.eta, 3)));
    CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("energy functionals") {
  Grid g = Grid::cube(16);
  FlowState rest = make_state({Spectrum(g, 3), Spectrum(g, 3), 0}, {});
  auto e = energy_functionals(rest, current_pack(rest));
  CHECK(e.E == 0.0);
  CHECK(e.D == 0.0);
  CHECK(e.E1 == 0.0);
  CHECK(e.E2 == 0.0);

  FlowParams p{1.0, 1.0, 3.0};
  FlowState sh = make_state({shear(g, 0.2), Spectrum(g, 3), 0}, p);
  e = energy_functionals(sh, current_pack(sh));
  CHECK(e.E == doctest::Approx(0.5 * 3.0 * 0.04 * 4 * kPi3));
  CHECK(e.D == 0.0);

  Spectrum u = abc_flow(g, 0.1), eta = random_band_limited(g, 3, 2, 0.01, 5);
  FlowState a = make_state({eta, u, 0}, p), b = make_state({2.0 * eta, 2.0 * u, 0}, p);
  auto ea = energy_functionals(a, current_pack(a));
  auto eb = energy_functionals(b, current_pack(b));
  CHECK(eb.E == doctest::Approx(4 * ea.E).epsilon(1e-12));
  CHECK(eb.E1 == doctest::Approx(4 * ea.E1).epsilon(1e-12));
  CHECK(eb.E2 == doctest::Approx(4 * ea.E2).epsilon(1e-12));

  // cross term with exact multiplicity: eta = u = sin(y1 + y2) e1 gives
  // (d11, d12, d22) each contributing 4 pi^3.
  Spectrum f = sample_spectrum(g, 3, [](double x, double y, double, std::span<double> o) {
    o[0] = std::sin(x + y);
    o[1] = o[2] = 0;
  });
  CHECK(multi_index_inner(f, f, 2) == doctest::Approx(3 * 4 * kPi3));
}

TEST_CASE("compressible energy functionals") {
  Grid g = Grid::cube(16);
  CompressibleState s;
  s.eta = Spectrum(g, 3);
  s.u = Spectrum(g, 3);
  s.params = {1.0, 1.0, 1.0, 1.0, PressureLaw(1.0, 1.4, 1.0)};
  auto e = energy_functionals(s, compressible_pack(s.eta));
  CHECK(std::abs(e.E) < 1e-12);
  CHECK(std::abs(e.E2) < 1e-12);
  s.eta = random_band_limited(g, 3, 2, 0.02, 6);
  CHECK(compressible_energy_excess(s, compressible_pack(s.eta)) > 0.0);
}

TEST_CASE("deviation norms") {
  Grid g = Grid::cube(16);
  Spectrum u = random_band_limited(g, 3, 3, 1.0, 7), e = random_band_limited(g, 3, 3, 1.0, 8);
  auto z = deviation_norms(u, e, u, e, 2.0);
  CHECK(z.combined == 0.0);
  Spectrum zero(g, 3);
  auto d = deviation_norms(sin_y2_e1(g), zero, zero, zero, 2.0);
  CHECK(d.u == doctest::Approx(12 * kPi3));
  CHECK(d.eta == 0.0);
  CHECK(d.combined == doctest::Approx(12 * kPi3));

  Spectrum u2 = random_band_limited(g, 3, 3, 1.0, 9), e2 = random_band_limited(g, 3, 3, 1.0, 10);
  auto k1 = deviation_norms(u, e, u2, e2, 1.0), k2 = deviation_norms(u, e, u2, e2, 2.0);
  CHECK(k2.u == k1.u);
  CHECK(k2.eta == doctest::Approx(2 * k1.eta));
  auto sw = deviation_norms(u2, e2, u, e, 1.0);
  CHECK(sw.combined == doctest::Approx(k1.combined).epsilon(1e-14));
}

TEST_CASE("decay fit") {
  std::vector<double> t, v, w, mix;
  for (int i = 0; i <= 40; ++i) {
    t.push_back(0.05 * i);
    v.push_back(std::exp(-0.5 * t.back()));
    w.push_back(3 * std::exp(-2 * t.back()));
    mix.push_back(std::exp(-t.back()) + 0.01 * std::exp(-0.1 * t.back()));
  }
  auto f = fit_decay_rate(t, v, 0.0, 2.0);
  CHECK(f.rate == doctest::Approx(0.5));
  CHECK(f.r2 == doctest::Approx(1.0));
  f = fit_decay_rate(t, w, 0.0, 2.0);
  CHECK(f.rate == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(std::log(3.0)));
  f = fit_decay_rate(t, mix, 0.0, 2.0);
  CHECK(f.rate >= 0.9);
  CHECK(f.rate <= 1.0);

  std::vector<double> scaled = mix;
  for (double& x : scaled) x *= 17.0;
  auto g = fit_decay_rate(t, scaled, 0.0, 2.0);
  CHECK(g.rate == doctest::Approx(f.rate).epsilon(1e-12));
  CHECK(g.intercept == doctest::Approx(f.intercept + std::log(17.0)));

  CHECK_THROWS_AS(fit_decay_rate(t, v, 0.0, 0.3), WindowTooSmall);
  std::vector<double> bad = v;
  bad[5] = 0.0;
  CHECK_THROWS_AS(fit_decay_rate(t, bad, 0.0, 2.0), NonPositiveSamples);
  auto tail = fit_decay_rate_tail(t, v);
  CHECK(tail.t_a == doctest::Approx(1.0));
}

TEST_CASE("modal decay rates") {
  std::vector<double> x;
  const double dt = 0.05;
  for (int i = 0; i < 200; ++i) {
    const double t = dt * i;
    x.push_back(std::exp(-0.5 * t) * std::sin(std::sqrt(3.0) / 2 * t + 0.3));
  }
  auto m = modal_decay_rates(x, dt);
  CHECK(m.slow == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(m.frequency == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-8));
  x.clear();
  for (int i = 0; i < 200; ++i) {
    const double t = dt * i;
    x.push_back(2 * std::exp(-0.3 * t) - std::exp(-1.7 * t));
  }
  m = modal_decay_rates(x, dt);
  CHECK(m.slow == doctest::Approx(0.3).epsilon(1e-8));
  CHECK(m.fast == doctest::Approx(1.7).epsilon(1e-8));
}
