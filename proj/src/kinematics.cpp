#include "visco/kinematics.hpp"

#include <algorithm>
#include <cmath>

#include "visco/errors.hpp"
#include "visco/kernels.hpp"
#include "visco/spectral/fft.hpp"
#include "visco/spectral/operators.hpp"

namespace visco {

using kernels::Exec;
using kernels::for_each_index;

namespace {

Spectrum identity_tensor(const Grid& g) {
  Spectrum s(g, 9);
  for (int i = 0; i < 3; ++i) s.comp(tidx(i, i))[0] = 1.0;
  return s;
}

Field minus_identity(const Field& m) {
  Field out = m;
  for (int i = 0; i < 3; ++i) {
    for (double& v : out.comp(tidx(i, i))) v -= 1.0;
  }
  return out;
}

}  // namespace

DeformationPack build_pack(const Spectrum& eta, const PackOptions& opts) {
  if (eta.comps() != 3) throw Error("build_pack: eta must be a vector field");
  const Grid& g = eta.grid();
  const Spectrum grad = gradient(eta);

  // J is cubic in grad eta: use the degree-3 product grid.
  ProductSpace cubic(g, 3);
  const Field gf = cubic.lift(grad);
  const std::size_t n = cubic.fine().points();
  Field cof_f(cubic.fine(), 9), jac_f(cubic.fine(), 1);
  kernels::cofactor_jacobian(gf.data(), cof_f.data(), jac_f.data(), n);

  const double jmin = jac_f.min(0);
  const double jmax = jac_f.max(0);
  if (jmin <= 0.0) throw SingularMap(jmin);

  DeformationPack pack{.eta = eta,
                       .grad_zeta = grad + identity_tensor(g),
                       .jac = cubic.restrict(jac_f),
                       .cof = cubic.restrict(cof_f),
                       .amat = {},
                       .atilde = {},
                       .min_jac = jmin,
                       .max_jac = jmax,
                       .valid = jmin > opts.j_floor,
                       .options = opts,
                       .space = ProductSpace(g, 2),
                       .amat_fine = {},
                       .atilde_fine = {}};

  if (opts.unit_jacobian) {
    pack.amat = pack.cof;
  } else {
    Field a_f(cubic.fine(), 9);
    auto c = cof_f.data();
    auto j = jac_f.comp(0);
    auto a = a_f.data();
    for_each_index(n, Exec::Parallel, [&](std::size_t p) {
      const double inv = 1.0 / j[p];
      for (int k = 0; k < 9; ++k) a[k * n + p] = c[k * n + p] * inv;
    });
    pack.amat = cubic.restrict(a_f);
  }
  pack.atilde = pack.amat - identity_tensor(g);
  pack.amat_fine = pack.space.lift(pack.amat);
  pack.atilde_fine = minus_identity(pack.amat_fine);
  return pack;
}

Spectrum weighted_gradient(const ProductSpace& ps, const Field& mat, const Spectrum& f) {
  const int comps = f.comps();
  const Field gf = ps.lift(gradient(f));
  const std::size_t n = ps.fine().points();
  Field out(ps.fine(), 3 * comps);
  for (int i = 0; i < comps; ++i) {
    kernels::contract(mat.data(), gf.data().subspan(3 * i * n, 3 * n),
                      out.data().subspan(3 * i * n, 3 * n), n, false);
  }
  return ps.restrict(out);
}

Spectrum weighted_divergence(const ProductSpace& ps, const Field& mat, const Spectrum& x) {
  if (x.comps() != 3 && x.comps() != 9) throw Error("weighted_divergence: vector or tensor input");
  const int rows = x.comps() / 3;
  const Field tf = ps.lift(gradient(x));
  const std::size_t n = ps.fine().points();
  Field out(ps.fine(), rows);
  auto m = mat.data();
  auto t = tf.data();
  auto o = out.data();
  for_each_index(n, Exec::Parallel, [&](std::size_t p) {
    for (int i = 0; i < rows; ++i) {
      double s = 0.0;
      for (int l = 0; l < 3; ++l) {
        for (int k = 0; k < 3; ++k) s += m[tidx(l, k) * n + p] * t[(3 * (3 * i + l) + k) * n + p];
      }
      o[i * n + p] = s;
    }
  });
  return ps.restrict(out);
}

namespace {

// d_k (M_lk X_il), equal to M_lk d_k X_il when the rows of M are divergence free.
Spectrum conservative_divergence(const ProductSpace& ps, const Field& mat, const Spectrum& x) {
  if (x.comps() != 3 && x.comps() != 9) throw Error("weighted_divergence: vector or tensor input");
  const int rows = x.comps() / 3;
  const Field xf = ps.lift(x);
  const std::size_t n = ps.fine().points();
  Field flux(ps.fine(), 3 * rows);
  auto m = mat.data();
  auto xv = xf.data();
  auto o = flux.data();
  for_each_index(n, Exec::Parallel, [&](std::size_t p) {
    for (int i = 0; i < rows; ++i) {
      for (int k = 0; k < 3; ++k) {
        double s = 0.0;
        for (int l = 0; l < 3; ++l) s += m[tidx(l, k) * n + p] * xv[(3 * i + l) * n + p];
        o[(3 * i + k) * n + p] = s;
      }
    }
  });
  return divergence(ps.restrict(flux));
}

}  // namespace

Spectrum a_gradient(const DeformationPack& pack, const Spectrum& f) {
  return weighted_gradient(pack.space, pack.amat_fine, f);
}

Spectrum a_divergence(const DeformationPack& pack, const Spectrum& x) {
  if (pack.options.unit_jacobian) return conservative_divergence(pack.space, pack.amat_fine, x);
  return weighted_divergence(pack.space, pack.amat_fine, x);
}

Spectrum a_laplacian(const DeformationPack& pack, const Spectrum& f) {
  return a_divergence(pack, a_gradient(pack, f));
}

Spectrum atilde_gradient(const DeformationPack& pack, const Spectrum& f) {
  return weighted_gradient(pack.space, pack.atilde_fine, f);
}

Spectrum atilde_divergence(const DeformationPack& pack, const Spectrum& x) {
  if (pack.options.unit_jacobian) return conservative_divergence(pack.space, pack.atilde_fine, x);
  return weighted_divergence(pack.space, pack.atilde_fine, x);
}

double piola_residual(const DeformationPack& pack) {
  const Grid& g = pack.grid();
  Grid audit = g;
  audit.dealias = Dealias::Pad2x;
  Spectrum eta2(audit, 3);
  std::copy(pack.eta.data().begin(), pack.eta.data().end(), eta2.data().begin());
  ProductSpace ps(audit, 3);
  const Field gf = ps.lift(gradient(eta2));
  const std::size_t n = ps.fine().points();
  Field cof_f(ps.fine(), 9), jac_f(ps.fine(), 1);
  kernels::cofactor_jacobian(gf.data(), cof_f.data(), jac_f.data(), n);
  const Spectrum cof = ps.restrict(cof_f);
  const Spectrum rowdiv = divergence(cof);
  const double denom = sobolev_norm(cof, 0);
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) worst = std::max(worst, sobolev_norm(rowdiv.component(i), 0));
  return denom > 0.0 ? worst / denom : worst;
}

namespace {

struct CubicParts {
  Spectrum det_full;  // det(I + G)
  Spectrum r_eta;
  Spectrum jinv;      // 1/det(I + G)
};

CubicParts cubic_parts(const Spectrum& eta) {
  Grid audit = eta.grid();
  audit.dealias = Dealias::Pad2x;
  Spectrum e(audit, 3);
  std::copy(eta.data().begin(), eta.data().end(), e.data().begin());
  ProductSpace ps(audit, 3);
  const Field gf = ps.lift(gradient(e));
  const std::size_t n = ps.fine().points();
  Field det(ps.fine(), 1), r(ps.fine(), 1), jinv(ps.fine(), 1);
  auto G = gf.data();
  auto pd = det.data(), pr = r.data(), pj = jinv.data();
  for_each_index(n, Exec::Parallel, [&](std::size_t p) {
    double a[3][3];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a[i][j] = G[tidx(i, j) * n + p];
    const double tr = a[0][0] + a[1][1] + a[2][2];
    double tr_sq = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) tr_sq += a[i][k] * a[k][i];
    const double det_g = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                         a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    const double f00 = 1 + a[0][0], f11 = 1 + a[1][1], f22 = 1 + a[2][2];
    const double det_f = f00 * (f11 * f22 - a[1][2] * a[2][1]) -
                         a[0][1] * (a[1][0] * f22 - a[1][2] * a[2][0]) +
                         a[0][2] * (a[1][0] * a[2][1] - f11 * a[2][0]);
    pd[p] = det_f;
    pr[p] = 0.5 * (tr * tr - tr_sq) + det_g;
    pj[p] = 1.0 / det_f;
  });
  return {ps.restrict(det), ps.restrict(r), ps.restrict(jinv)};
}

}  // namespace

double det_expansion_residual(const Spectrum& eta) {
  CubicParts parts = cubic_parts(eta);
  Spectrum div(parts.det_full.grid(), 1);
  {
    Spectrum e(parts.det_full.grid(), 3);
    std::copy(eta.data().begin(), eta.data().end(), e.data().begin());
    div = divergence(e);
  }
  Spectrum res = parts.det_full - div - parts.r_eta;
  res.comp(0)[0] -= 1.0;
  return sobolev_norm(res, 0);
}

std::pair<double, double> jinv_expansion_residual(const Spectrum& eta) {
  CubicParts parts = cubic_parts(eta);
  Spectrum e(parts.jinv.grid(), 3);
  std::copy(eta.data().begin(), eta.data().end(), e.data().begin());
  Spectrum res = parts.jinv + divergence(e);
  res.comp(0)[0] -= 1.0;
  return {sobolev_norm(res, 0), sobolev_norm_squared(gradient(eta), 2)};
}

Spectrum make_volume_preserving_eta(const Grid& g, EtaKind kind, const std::vector<Shear>& shears) {
  if (kind == EtaKind::Zero) return Spectrum(g, 3);
  if (shears.empty()) throw ConfigError("make_volume_preserving_eta: no shear given");
  if (kind == EtaKind::Shear && shears.size() != 1) {
    throw ConfigError("make_volume_preserving_eta: kind=shear takes exactly one shear");
  }
  for (const auto& s : shears) {
    if (s.component == s.axis || s.component < 0 || s.component > 2 || s.axis < 0 || s.axis > 2) {
      throw ConfigError("shear must displace a component orthogonal to its dependency axis");
    }
  }
  Field f = Field::sample(g, 3, [&](double y1, double y2, double y3, std::span<double> out) {
    double x[3] = {y1, y2, y3};
    for (const auto& s : shears) {
      x[s.component] += s.amplitude * std::sin(s.wavenumber * x[s.axis] + s.phase);
    }
    out[0] = x[0] - y1;
    out[1] = x[1] - y2;
    out[2] = x[2] - y3;
  });
  Spectrum eta = forward(f);
  zero_nyquist(eta);
  build_pack(eta);  // throws SingularMap for degenerate input
  return eta;
}

}  // namespace visco
