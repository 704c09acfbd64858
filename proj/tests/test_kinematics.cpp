#include <cmath>

#include "doctest.h"
#include "test_util.hpp"
#include "visco/errors.hpp"
#include "visco/kernels.hpp"
#include "visco/kinematics.hpp"
#include "visco/spectral/operators.hpp"

using namespace visco;
using visco::testing::max_abs;
using visco::testing::max_abs_diff;
using visco::testing::random_band_limited;
using visco::testing::sample_spectrum;

namespace {

Spectrum shear_eta(const Grid& g, double alpha) {
  return make_volume_preserving_eta(g, EtaKind::Shear, {Shear{0, 1, alpha, 1, 0.0}});
}

Spectrum composed_eta(const Grid& g, double a, double b) {
  return make_volume_preserving_eta(g, EtaKind::ComposedShears,
                                    {Shear{0, 1, a, 1, 0.3}, Shear{1, 0, b, 1, -0.2}});
}

}  // namespace

TEST_CASE("rest state pack") {
  Grid g = Grid::cube(16);
  auto pack = build_pack(Spectrum(g, 3));
  CHECK(pack.valid);
  CHECK(pack.min_jac == 1.0);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double id = i == j ? 1.0 : 0.0;
      CHECK(pack.grad_zeta.mean(tidx(i, j)) == id);
      CHECK(pack.amat.mean(tidx(i, j)) == id);
    }
  }
  CHECK(max_abs(pack.atilde) < 1e-15);
  CHECK(pack.jac.mean(0) == doctest::Approx(1.0));
}

TEST_CASE("shear pack matches the symbolic inverse transpose") {
  Grid g = Grid::cube(16);
  const double alpha = 0.2;
  for (bool unit : {false, true}) {
    auto pack = build_pack(shear_eta(g, alpha), {.j_floor = 0.1, .unit_jacobian = unit});
    Spectrum cosy2 = sample_spectrum(g, 1, [&](double, double b, double, std::span<double> o) {
      o[0] = alpha * std::cos(b);
    });
    CHECK(max_abs_diff(pack.grad_zeta.component(tidx(0, 1)), cosy2) < 1e-13);
    CHECK(max_abs_diff(pack.amat.component(tidx(1, 0)), -1.0 * cosy2) < 1e-13);
    Spectrum j = pack.jac;
    j.comp(0)[0] -= 1.0;
    CHECK(max_abs(j) < 1e-13);
    for (int k : {tidx(0, 1), tidx(0, 2), tidx(1, 2), tidx(2, 0), tidx(2, 1)}) {
      CHECK(max_abs(pack.amat.component(k)) < 1e-13);
    }
  }
}

TEST_CASE("constant diagonal deformation gradient") {
  const std::size_t n = 4;
  std::vector<double> grad(9 * n, 0.0), cof(9 * n), jac(n);
  const double d[3] = {2.0, 0.5, 3.0};
  for (int i = 0; i < 3; ++i)
    for (std::size_t p = 0; p < n; ++p) grad[tidx(i, i) * n + p] = d[i] - 1.0;
  kernels::cofactor_jacobian(grad, cof, jac, n, kernels::Exec::Serial);
  CHECK(jac[0] == doctest::Approx(3.0));
  for (int i = 0; i < 3; ++i) CHECK(cof[tidx(i, i) * n] / jac[0] == doctest::Approx(1.0 / d[i]));
  CHECK(cof[tidx(0, 1) * n] == 0.0);
}

TEST_CASE("A-weighted operators") {
  Grid g = Grid::cube(16);
  Spectrum f = random_band_limited(g, 1, 3, 1.0, 1);
  Spectrum x = random_band_limited(g, 3, 3, 1.0, 2);

  auto rest = build_pack(Spectrum(g, 3));
  CHECK(max_abs_diff(a_gradient(rest, f), gradient(f)) < 1e-13);
  CHECK(max_abs_diff(a_divergence(rest, x), divergence(x)) < 1e-13);

  const double alpha = 0.1;
  auto pack = build_pack(shear_eta(g, alpha));
  Spectrum xs = sample_spectrum(g, 3, [](double a, double, double, std::span<double> o) {
    o[0] = 0;
    o[1] = std::sin(a);
    o[2] = 0;
  });
  Spectrum expect = sample_spectrum(g, 1, [&](double a, double b, double, std::span<double> o) {
    o[0] = -alpha * std::cos(b) * std::cos(a);
  });
  CHECK(max_abs_diff(a_divergence(pack, xs), expect) < 1e-13);

  Spectrum y = random_band_limited(g, 3, 3, 1.0, 3);
  Spectrum lhs = a_divergence(pack, 2.0 * x + (-3.0) * y);
  Spectrum rhs = 2.0 * a_divergence(pack, x) + (-3.0) * a_divergence(pack, y);
  CHECK(max_abs_diff(lhs, rhs) < 1e-12);

  Spectrum lap = a_laplacian(pack, f);
  Spectrum composed = a_divergence(pack, a_gradient(pack, f));
  CHECK(max_abs_diff(lap, composed) == 0.0);
}

TEST_CASE("A^T grad zeta = I pointwise") {
  Grid g = Grid::cube(16);
  Spectrum eta = sample_spectrum(g, 3, [](double a, double b, double c, std::span<double> o) {
    o[0] = 0.01 * std::sin(a + b);
    o[1] = 0.01 * std::cos(c);
    o[2] = 0.01 * std::sin(a);
  });
  auto pack = build_pack(eta);
  Field a = backward(pack.amat), f = backward(pack.grad_zeta);
  double err = 0.0;
  for (std::size_t p = 0; p < g.points(); ++p) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += a.comp(tidx(k, i))[p] * f.comp(tidx(k, j))[p];
        err = std::max(err, std::abs(s - (i == j ? 1.0 : 0.0)));
      }
  }
  CHECK(err < 1e-10);
}

TEST_CASE("singular and invalid maps") {
  Grid g = Grid::cube(16);
  auto compress = [&](double amp) {
    return sample_spectrum(g, 3, [amp](double a, double, double, std::span<double> o) {
      o[0] = amp * std::sin(a);
      o[1] = o[2] = 0;
    });
  };
  CHECK_THROWS_AS(build_pack(compress(2.0)), SingularMap);
  auto pack = build_pack(compress(0.95));
  CHECK_FALSE(pack.valid);
  CHECK_FALSE(pack.in_analytic_window());
  CHECK(build_pack(compress(0.3)).in_analytic_window());
}

TEST_CASE("Piola identity") {
  Grid g = Grid::cube(16);
  CHECK(piola_residual(build_pack(Spectrum(g, 3))) == 0.0);
  CHECK(piola_residual(build_pack(shear_eta(g, 0.3))) < 1e-14);
  for (unsigned seed = 0; seed < 5; ++seed) {
    auto pack = build_pack(random_band_limited(g, 3, 4, 0.01, 100 + seed));
    CHECK(piola_residual(pack) <= 1e-11);
  }
}

TEST_CASE("determinant expansion") {
  Grid g = Grid::cube(16);
  CHECK(det_expansion_residual(Spectrum(g, 3)) < 1e-15);
  CHECK(det_expansion_residual(shear_eta(g, 0.3)) < 1e-12);
  for (unsigned seed = 0; seed < 5; ++seed) {
    CHECK(det_expansion_residual(random_band_limited(g, 3, 4, 0.1, 200 + seed)) <= 1e-11);
  }
}

TEST_CASE("inverse Jacobian expansion is quadratic") {
  Grid g = Grid::cube(16);
  auto z = jinv_expansion_residual(Spectrum(g, 3));
  CHECK(z.first < 1e-15);
  CHECK(z.second == 0.0);
  CHECK(jinv_expansion_residual(shear_eta(g, 0.2)).first < 1e-12);

  Spectrum eta = random_band_limited(g, 3, 2, 0.01, 300);
  const double r1 = jinv_expansion_residual(eta).first;
  const double r2 = jinv_expansion_residual(0.5 * eta).first;
  CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("volume-preserving initial displacements") {
  Grid g = Grid::cube(16);
  CHECK(max_abs(make_volume_preserving_eta(g, EtaKind::Zero, {})) == 0.0);
  Spectrum s = shear_eta(g, 0.25);
  Spectrum expect = sample_spectrum(g, 3, [](double, double b, double, std::span<double> o) {
    o[0] = 0.25 * std::sin(b);
    o[1] = o[2] = 0;
  });
  CHECK(max_abs_diff(s, expect) < 1e-15);

  Grid g2 = Grid::cube(16, Dealias::Pad2x);
  auto pack = build_pack(composed_eta(g2, 0.05, 0.05));
  Spectrum j = pack.jac;
  j.comp(0)[0] -= 1.0;
  CHECK(max_abs(j) < 1e-11);
  CHECK(std::abs(pack.min_jac - 1.0) < 1e-11);
  CHECK_THROWS_AS(make_volume_preserving_eta(g, EtaKind::Shear, {Shear{1, 1, 0.1, 1, 0}}), ConfigError);
}

TEST_CASE("A - I scales linearly with the displacement") {
  Grid g = Grid::cube(16);
  Spectrum eta = random_band_limited(g, 3, 2, 0.01, 400);
  const double a1 = sobolev_norm(build_pack(eta).atilde, 2);
  const double a2 = sobolev_norm(build_pack(0.5 * eta).atilde, 2);
  CHECK(a1 / a2 == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("A-divergence integrates to zero for volume-preserving maps") {
  Grid g = Grid::cube(16);
  auto pack = build_pack(composed_eta(g, 0.1, 0.08), {.j_floor = 0.1, .unit_jacobian = true});
  Spectrum x = random_band_limited(g, 3, 4, 1.0, 500);
  CHECK(std::abs(a_divergence(pack, x).mean(0)) < 1e-10);
}
