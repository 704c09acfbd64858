#pragma once

#include <cmath>
#include <random>

#include "visco/spectral/fft.hpp"
#include "visco/spectral/padded.hpp"

namespace visco::testing {

/// Real field with random coefficients on |k_i| <= kmax, decaying like 1/(1+|k|^2).
inline Spectrum random_band_limited(const Grid& g, int comps, int kmax, double amplitude,
                                    unsigned seed, bool keep_mean = true) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Spectrum s(g, comps);
  for (int c = 0; c < comps; ++c) {
    for (int k3 = -kmax; k3 <= kmax; ++k3) {
      for (int k2 = -kmax; k2 <= kmax; ++k2) {
        for (int k1 = 0; k1 <= kmax; ++k1) {
          const double w = amplitude / (1.0 + k1 * k1 + k2 * k2 + k3 * k3);
          s.mode(c, k1, k2, k3) = Complex(nd(rng), nd(rng)) * w;
        }
      }
    }
    if (!keep_mean) s.comp(c)[0] = 0.0;
  }
  // Round trip through physical space enforces Hermitian symmetry.
  Spectrum out = forward(backward(s));
  zero_nyquist(out);
  if (!keep_mean) {
    for (int c = 0; c < comps; ++c) out.comp(c)[0] = 0.0;
  }
  return out;
}

inline Spectrum sample_spectrum(const Grid& g, int comps, const Field::PointFn& fn) {
  Spectrum s = forward(Field::sample(g, comps, fn));
  zero_nyquist(s);
  return s;
}

inline double max_abs_diff(const Spectrum& a, const Spectrum& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

inline double max_abs(const Spectrum& a) {
  double m = 0.0;
  for (auto v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace visco::testing

namespace visco::testing {

/// Arnold-Beltrami-Childress flow, divergence free with |k| = 1.
inline Spectrum abc_flow(const Grid& g, double amp) {
  return sample_spectrum(g, 3, [amp](double a, double b, double c, std::span<double> o) {
    o[0] = amp * (std::sin(c) + std::cos(b));
    o[1] = amp * (std::sin(a) + std::cos(c));
    o[2] = amp * (std::sin(b) + std::cos(a));
  });
}

}  // namespace visco::testing
