#include "visco/kernels.hpp"

#include <cmath>

namespace visco::kernels {

void cofactor_jacobian(std::span<const double> grad, std::span<double> cof, std::span<double> jac,
                       std::size_t n, Exec exec) {
  for_each_index(n, exec, [&](std::size_t p) {
    double f[3][3];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) f[i][j] = grad[tidx(i, j) * n + p] + (i == j ? 1.0 : 0.0);
    // signed 2x2 minors, cof(i,j) = (-1)^(i+j) M_ij
    const double c00 = f[1][1] * f[2][2] - f[1][2] * f[2][1];
    const double c01 = f[1][2] * f[2][0] - f[1][0] * f[2][2];
    const double c02 = f[1][0] * f[2][1] - f[1][1] * f[2][0];
    const double c10 = f[0][2] * f[2][1] - f[0][1] * f[2][2];
    const double c11 = f[0][0] * f[2][2] - f[0][2] * f[2][0];
    const double c12 = f[0][1] * f[2][0] - f[0][0] * f[2][1];
    const double c20 = f[0][1] * f[1][2] - f[0][2] * f[1][1];
    const double c21 = f[0][2] * f[1][0] - f[0][0] * f[1][2];
    const double c22 = f[0][0] * f[1][1] - f[0][1] * f[1][0];
    cof[0 * n + p] = c00;
    cof[1 * n + p] = c01;
    cof[2 * n + p] = c02;
    cof[3 * n + p] = c10;
    cof[4 * n + p] = c11;
    cof[5 * n + p] = c12;
    cof[6 * n + p] = c20;
    cof[7 * n + p] = c21;
    cof[8 * n + p] = c22;
    jac[p] = f[0][0] * c00 + f[0][1] * c01 + f[0][2] * c02;
  });
}

void contract(std::span<const double> mat, std::span<const double> vec, std::span<double> out,
              std::size_t n, bool transpose, Exec exec) {
  for_each_index(n, exec, [&](std::size_t p) {
    for (int i = 0; i < 3; ++i) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) {
        const int idx = transpose ? tidx(k, i) : tidx(i, k);
        s += mat[idx * n + p] * vec[k * n + p];
      }
      out[i * n + p] = s;
    }
  });
}

namespace {

// One scalar 2x2 elimination of (eta, u) for stiffness a = |k|^2.
struct ModeUpdate {
  Complex u, eta;
};

inline ModeUpdate solve_scalar(double rho, double visc, double stiff, double a, double dt,
                               int order, Complex eta, Complex u, Complex f) {
  if (order == 1) {
    // eta' = eta + dt u',  rho (u' - u)/dt = -a (visc u' + stiff eta') + f
    const Complex un = (rho / dt * u - a * stiff * eta + f) / (rho / dt + a * visc + a * stiff * dt);
    return {un, eta + dt * un};
  }
  // trapezoidal in the sum s = u' + u
  const Complex s = (2.0 * rho / dt * u - a * stiff * eta + f) /
                    (rho / dt + 0.5 * a * visc + 0.25 * a * stiff * dt);
  return {s - u, eta + 0.5 * dt * s};
}

}  // namespace

void implicit_mode_solve(const StiffCoefficients& c, double dt, int order, Spectrum& eta,
                         Spectrum& u, const Spectrum& forcing, Exec exec) {
  const Grid& g = u.grid();
  const std::size_t nm = g.modes();
  Complex* pe = eta.data().data();
  Complex* pu = u.data().data();
  const Complex* pf = forcing.data().data();
  const bool split = c.visc_longitudinal != c.visc_transverse ||
                     c.stiff_longitudinal != c.stiff_transverse;

  for_each_mode(g, exec, [&](std::size_t m, ModeK k) {
    if (k.nyquist) {
      for (int d = 0; d < 3; ++d) pe[d * nm + m] = pu[d * nm + m] = 0.0;
      return;
    }
    const double a = k.norm2();
    if (!split || a == 0.0) {
      for (int d = 0; d < 3; ++d) {
        auto r = solve_scalar(c.rho, c.visc_transverse, c.stiff_transverse, a, dt, order,
                              pe[d * nm + m], pu[d * nm + m], pf[d * nm + m]);
        pu[d * nm + m] = r.u;
        pe[d * nm + m] = r.eta;
      }
      return;
    }
    const double kh[3] = {k.k1 / std::sqrt(a), k.k2 / std::sqrt(a), k.k3 / std::sqrt(a)};
    auto longi = [&](const Complex* v) {
      Complex s = 0.0;
      for (int d = 0; d < 3; ++d) s += kh[d] * v[d * nm + m];
      return s;
    };
    const Complex eL = longi(pe), uL = longi(pu), fL = longi(pf);
    auto rL = solve_scalar(c.rho, c.visc_longitudinal, c.stiff_longitudinal, a, dt, order, eL, uL,
                           fL);
    for (int d = 0; d < 3; ++d) {
      const Complex eT = pe[d * nm + m] - kh[d] * eL;
      const Complex uT = pu[d * nm + m] - kh[d] * uL;
      const Complex fT = pf[d * nm + m] - kh[d] * fL;
      auto rT = solve_scalar(c.rho, c.visc_transverse, c.stiff_transverse, a, dt, order, eT, uT, fT);
      pu[d * nm + m] = rT.u + kh[d] * rL.u;
      pe[d * nm + m] = rT.eta + kh[d] * rL.eta;
    }
  });
}

}  // namespace visco::kernels
