#include "visco/experiment/initial_data.hpp"

#include <cmath>
#include <random>

#include "visco/errors.hpp"
#include "visco/spectral/fft.hpp"
#include "visco/spectral/operators.hpp"
#include "visco/spectral/padded.hpp"

namespace visco::experiment {

Spectrum spectral_noise(const Grid& g, double amplitude, int kmax, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Spectrum s(g, 3);
  auto resolved = [](int k, int n) { return 2 * std::abs(k) < n; };
  for (int c = 0; c < 3; ++c) {
    for (int k3 = -kmax; k3 <= kmax; ++k3) {
      for (int k2 = -kmax; k2 <= kmax; ++k2) {
        for (int k1 = 0; k1 <= kmax; ++k1) {
          const double a = std::sqrt(double(k1 * k1 + k2 * k2 + k3 * k3));
          // draw for every slot so that coarser grids see a truncation of the same field
          const Complex z(nd(rng), nd(rng));
          if (a == 0.0 || a > kmax) continue;
          if (!resolved(k1, g.n1) || !resolved(k2, g.n2) || !resolved(k3, g.n3)) continue;
          s.mode(c, k1, k2, k3) = amplitude * std::pow(a, -4.0) * z;
        }
      }
    }
  }
  // The k1 = 0 plane holds both k and -k: keep one draw and mirror it.
  for (int c = 0; c < 3; ++c) {
    for (int k3 = -kmax; k3 <= kmax; ++k3) {
      for (int k2 = -kmax; k2 <= kmax; ++k2) {
        if (k3 < 0 || (k3 == 0 && k2 <= 0)) continue;
        if (!resolved(k2, g.n2) || !resolved(k3, g.n3)) continue;
        s.mode(c, 0, -k2, -k3) = std::conj(s.mode(c, 0, k2, k3));
      }
    }
  }
  return s;
}

Spectrum velocity_spec(const Grid& g, const VelocityRecipe& r, std::uint64_t seed) {
  switch (r.kind) {
    case VelocityKind::Zero:
      return Spectrum(g, 3);
    case VelocityKind::Mode: {
      const auto k = r.k;
      const auto d = r.direction;
      for (int i = 0; i < 3; ++i) {
        const int n = i == 0 ? g.n1 : i == 1 ? g.n2 : g.n3;
        if (2 * std::abs(k[i]) >= n) throw ConfigError("velocity mode is not resolved by the grid");
      }
      Spectrum s = forward(Field::sample(g, 3, [&](double a, double b, double c, std::span<double> o) {
        const double v = r.amplitude * std::sin(k[0] * a + k[1] * b + k[2] * c + r.phase);
        for (int i = 0; i < 3; ++i) o[i] = v * d[i];
      }));
      zero_nyquist(s);
      return s;
    }
    case VelocityKind::Abc: {
      Spectrum s = forward(Field::sample(g, 3, [&](double a, double b, double c, std::span<double> o) {
        o[0] = r.amplitude * (std::sin(c) + std::cos(b));
        o[1] = r.amplitude * (std::sin(a) + std::cos(c));
        o[2] = r.amplitude * (std::sin(b) + std::cos(a));
      }));
      zero_nyquist(s);
      return s;
    }
    case VelocityKind::Random:
      return leray_project(spectral_noise(g, r.amplitude, r.kmax, seed));
  }
  throw ConfigError("unknown velocity recipe");
}

namespace {

void add_mean(Spectrum& u, const std::array<double, 3>& mean) {
  for (int c = 0; c < 3; ++c) u.comp(c)[0] += mean[c];
}

}  // namespace

InitialData build_initial_data(const ExperimentConfig& c) {
  const InitialRecipe& r = c.initial;
  Spectrum spec = velocity_spec(c.grid, r.u, r.seed);
  InitialData d;
  if (c.model == Model::Incompressible) {
    d = make_initial_data(c.grid, r.eta_kind, r.shears, spec, c.scheme.proj_tol);
  } else {
    d.eta0 = make_volume_preserving_eta(c.grid, r.eta_kind, r.shears);
    d.u0 = std::move(spec);
  }
  add_mean(d.u0, r.u.mean);
  return d;
}

FlowState make_incompressible_state(const ExperimentConfig& c, const InitialData& d) {
  return make_state(d, c.flow_params());
}

CompressibleState make_compressible_state(const ExperimentConfig& c, const InitialData& d) {
  CompressibleState s;
  s.eta = d.eta0;
  s.u = d.u0;
  s.params = c.compressible_params();
  s.params.validate();
  return s;
}

}  // namespace visco::experiment
