#pragma once

// Data-parallel inner loops. Every kernel takes an Exec tag: Parallel runs the
// OpenMP version, Serial runs the plain reference loop used by tests and the
// benchmark. Kernels are pointwise or modewise, so both paths are bitwise equal.

#include <cstddef>
#include <span>

#include "visco/spectral/field.hpp"

namespace visco::kernels {

enum class Exec { Parallel, Serial };

template <class Fn>
inline void for_each_index(std::size_t n, Exec exec, Fn&& fn) {
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(n); ++i) fn(std::size_t(i));
  } else {
    for (std::size_t i = 0; i < n; ++i) fn(i);
  }
}

/// Signed wavenumbers of r2c mode m, plus a flag for Nyquist planes.
struct ModeK {
  int k1, k2, k3;
  bool nyquist;
  double norm2() const { return double(k1) * k1 + double(k2) * k2 + double(k3) * k3; }
};

inline ModeK decode_mode(const Grid& g, std::size_t m) {
  const int h1 = g.half1();
  const int j1 = int(m % h1);
  const std::size_t r = m / h1;
  const int i2 = int(r % g.n2);
  const int i3 = int(r / g.n2);
  const bool nyq = (j1 == g.n1 / 2) || (i2 == g.n2 / 2) || (i3 == g.n3 / 2);
  return {j1, wavenumber(i2, g.n2), wavenumber(i3, g.n3), nyq};
}

template <class Fn>
inline void for_each_mode(const Grid& g, Exec exec, Fn&& fn) {
  for_each_index(g.modes(), exec, [&](std::size_t m) { fn(m, decode_mode(g, m)); });
}

/// Cofactor matrix and determinant of F = I + G pointwise. G holds 9 planes of
/// n points with G(i,j) at plane 3i+j.
void cofactor_jacobian(std::span<const double> grad, std::span<double> cof, std::span<double> jac,
                       std::size_t n, Exec exec = Exec::Parallel);

/// out_i = sum_k M(i,k) v_k pointwise (or M(k,i) when transpose).
void contract(std::span<const double> mat, std::span<const double> vec, std::span<double> out,
              std::size_t n, bool transpose, Exec exec = Exec::Parallel);

/// Coefficients of the constant-coefficient stiff operator advanced implicitly:
///   eta_t = u,  rho u_t = visc Lap u + stiff Lap eta + F,
/// with separate (visc, stiff) pairs for longitudinal and transverse parts.
struct StiffCoefficients {
  double rho;
  double visc_transverse;
  double stiff_transverse;
  double visc_longitudinal;
  double stiff_longitudinal;
};

/// Per-mode implicit update (order 1: backward Euler, order 2: trapezoidal).
/// Inputs and outputs are 3-component spectra in place: u and eta are replaced
/// by the provisional end-of-step values.
void implicit_mode_solve(const StiffCoefficients& c, double dt, int order, Spectrum& eta,
                         Spectrum& u, const Spectrum& forcing, Exec exec = Exec::Parallel);

}  // namespace visco::kernels
