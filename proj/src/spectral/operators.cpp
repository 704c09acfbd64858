#include "visco/spectral/operators.hpp"

#include <cmath>
#include <string>

#include "visco/errors.hpp"
#include "visco/kernels.hpp"

namespace visco {

using kernels::decode_mode;
using kernels::Exec;
using kernels::for_each_mode;
using kernels::ModeK;

namespace {

inline int axis_k(const ModeK& k, int axis) { return axis == 0 ? k.k1 : axis == 1 ? k.k2 : k.k3; }

// Hermitian multiplicity of a stored r2c coefficient.
inline double half_weight(const Grid& g, std::size_t m) {
  const int j1 = int(m % g.half1());
  return (j1 == 0 || 2 * j1 == g.n1) ? 1.0 : 2.0;
}

// sum over |alpha| = m of prod_i k_i^(2 alpha_i)
double multi_index_weight(const ModeK& k, int m) {
  const double q[3] = {double(k.k1) * k.k1, double(k.k2) * k.k2, double(k.k3) * k.k3};
  double s = 0.0;
  for (int a1 = 0; a1 <= m; ++a1) {
    for (int a2 = 0; a1 + a2 <= m; ++a2) {
      const int a3 = m - a1 - a2;
      s += std::pow(q[0], a1) * std::pow(q[1], a2) * std::pow(q[2], a3);
    }
  }
  return s;
}

}  // namespace

Spectrum partial(const Spectrum& f, int axis) {
  const Grid& g = f.grid();
  Spectrum out(g, f.comps());
  const std::size_t nm = g.modes();
  for_each_mode(g, Exec::Parallel, [&](std::size_t m, ModeK k) {
    const Complex ik(0.0, k.nyquist ? 0.0 : double(axis_k(k, axis)));
    for (int c = 0; c < f.comps(); ++c) out.data()[c * nm + m] = ik * f.data()[c * nm + m];
  });
  return out;
}

Spectrum gradient(const Spectrum& f) {
  if (f.comps() != 1 && f.comps() != 3 && f.comps() != 9) {
    throw Error("gradient: expects a scalar, vector or tensor field");
  }
  const Grid& g = f.grid();
  Spectrum out(g, f.comps() * 3);
  const std::size_t nm = g.modes();
  for_each_mode(g, Exec::Parallel, [&](std::size_t m, ModeK k) {
    for (int c = 0; c < f.comps(); ++c) {
      const Complex v = f.data()[c * nm + m];
      for (int j = 0; j < 3; ++j) {
        const Complex ik(0.0, k.nyquist ? 0.0 : double(axis_k(k, j)));
        out.data()[(3 * c + j) * nm + m] = ik * v;
      }
    }
  });
  return out;
}

Spectrum divergence(const Spectrum& f) {
  if (f.comps() != 3 && f.comps() != 9) throw Error("divergence: expects a vector or tensor field");
  const Grid& g = f.grid();
  const int rows = f.comps() / 3;
  Spectrum out(g, rows);
  const std::size_t nm = g.modes();
  for_each_mode(g, Exec::Parallel, [&](std::size_t m, ModeK k) {
    for (int i = 0; i < rows; ++i) {
      Complex s = 0.0;
      if (!k.nyquist) {
        for (int j = 0; j < 3; ++j) s += Complex(0.0, axis_k(k, j)) * f.data()[(3 * i + j) * nm + m];
      }
      out.data()[i * nm + m] = s;
    }
  });
  return out;
}

Spectrum laplacian(const Spectrum& f) {
  const Grid& g = f.grid();
  Spectrum out(g, f.comps());
  const std::size_t nm = g.modes();
  for_each_mode(g, Exec::Parallel, [&](std::size_t m, ModeK k) {
    const double w = k.nyquist ? 0.0 : -k.norm2();
    for (int c = 0; c < f.comps(); ++c) out.data()[c * nm + m] = w * f.data()[c * nm + m];
  });
  return out;
}

Spectrum inverse_laplacian(const Spectrum& f, double rel_tol) {
  const double norm = sobolev_norm(f, 0) / std::sqrt(kBoxVolume);
  for (int c = 0; c < f.comps(); ++c) {
    if (std::abs(f.mean(c)) > rel_tol * norm && std::abs(f.mean(c)) > 0.0) {
      throw NonZeroMean("inverse_laplacian: component " + std::to_string(c) + " has mean " +
                        std::to_string(f.mean(c)));
    }
  }
  const Grid& g = f.grid();
  Spectrum out(g, f.comps());
  const std::size_t nm = g.modes();
  for_each_mode(g, Exec::Parallel, [&](std::size_t m, ModeK k) {
    const double a = k.norm2();
    const double w = (k.nyquist || a == 0.0) ? 0.0 : -1.0 / a;
    for (int c = 0; c < f.comps(); ++c) out.data()[c * nm + m] = w * f.data()[c * nm + m];
  });
  return out;
}

Spectrum leray_project(const Spectrum& v) {
  if (v.comps() != 3) throw Error("leray_project: expects a vector field");
  const Grid& g = v.grid();
  Spectrum out(g, 3);
  const std::size_t nm = g.modes();
  for_each_mode(g, Exec::Parallel, [&](std::size_t m, ModeK k) {
    const Complex* in = v.data().data();
    Complex* o = out.data().data();
    if (k.nyquist) return;
    const double a = k.norm2();
    if (a == 0.0) {
      for (int d = 0; d < 3; ++d) o[d * nm + m] = in[d * nm + m];
      return;
    }
    const double kv[3] = {double(k.k1), double(k.k2), double(k.k3)};
    Complex kdot = 0.0;
    for (int d = 0; d < 3; ++d) kdot += kv[d] * in[d * nm + m];
    for (int d = 0; d < 3; ++d) o[d * nm + m] = in[d * nm + m] - kv[d] * kdot / a;
  });
  return out;
}

double sobolev_norm_squared(const Spectrum& f, int k) {
  if (k < 0 || k > 3) throw Error("sobolev_norm: order must be in 0..3");
  const Grid& g = f.grid();
  const std::size_t nm = g.modes();
  double total = 0.0;
  for (std::size_t m = 0; m < nm; ++m) {
    const ModeK km = decode_mode(g, m);
    double w = 0.0;
    for (int order = 0; order <= k; ++order) w += multi_index_weight(km, order);
    double s = 0.0;
    for (int c = 0; c < f.comps(); ++c) s += std::norm(f.data()[c * nm + m]);
    total += half_weight(g, m) * w * s;
  }
  return kBoxVolume * total;
}

double sobolev_norm(const Spectrum& f, int k) { return std::sqrt(sobolev_norm_squared(f, k)); }

double gradient_power_squared(const Spectrum& f, int m) {
  const Grid& g = f.grid();
  const std::size_t nm = g.modes();
  double total = 0.0;
  for (std::size_t i = 0; i < nm; ++i) {
    const double a = decode_mode(g, i).norm2();
    double s = 0.0;
    for (int c = 0; c < f.comps(); ++c) s += std::norm(f.data()[c * nm + i]);
    total += half_weight(g, i) * std::pow(a, m) * s;
  }
  return kBoxVolume * total;
}

double multi_index_inner(const Spectrum& a, const Spectrum& b, int m) {
  const Grid& g = a.grid();
  const std::size_t nm = g.modes();
  double total = 0.0;
  for (std::size_t i = 0; i < nm; ++i) {
    const double w = multi_index_weight(decode_mode(g, i), m);
    double s = 0.0;
    for (int c = 0; c < a.comps(); ++c) {
      s += (a.data()[c * nm + i] * std::conj(b.data()[c * nm + i])).real();
    }
    total += half_weight(g, i) * w * s;
  }
  return kBoxVolume * total;
}

double inner(const Spectrum& a, const Spectrum& b) { return multi_index_inner(a, b, 0); }

double l2_norm_physical(const Field& f) {
  double s = 0.0;
  for (double v : f.data()) s += v * v;
  return std::sqrt(s * f.grid().cell_volume());
}

std::vector<double> box_average(const Spectrum& f) {
  std::vector<double> out(f.comps());
  for (int c = 0; c < f.comps(); ++c) out[c] = f.mean(c);
  return out;
}

}  // namespace visco
