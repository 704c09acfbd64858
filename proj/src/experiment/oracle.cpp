#include "visco/experiment/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "visco/experiment/initial_data.hpp"
#include "visco/experiment/output.hpp"
#include "visco/linear_reference.hpp"
#include "visco/spectral/fft.hpp"
#include "visco/spectral/operators.hpp"

namespace visco::experiment {

namespace {

OracleCheck make_check(const std::string& name, double value, double tol, int trials) {
  return {name, value, tol, trials, value <= tol};
}

// rho x'' + visc a x' + stiff a x = 0 by classical RK4.
ModeEvolution integrate_mode(double rho, double visc, double stiff, double a, Complex x, Complex v,
                             double t, int steps) {
  const double h = t / steps;
  auto acc = [&](Complex xx, Complex vv) { return -(visc * a * vv + stiff * a * xx) / rho; };
  for (int i = 0; i < steps; ++i) {
    const Complex k1x = v, k1v = acc(x, v);
    const Complex k2x = v + 0.5 * h * k1v, k2v = acc(x + 0.5 * h * k1x, v + 0.5 * h * k1v);
    const Complex k3x = v + 0.5 * h * k2v, k3v = acc(x + 0.5 * h * k2x, v + 0.5 * h * k2v);
    const Complex k4x = v + h * k3v, k4v = acc(x + h * k3x, v + h * k3v);
    x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  }
  return {x, v};
}

double fft_round_trip(const Grid& g, std::uint64_t seed) {
  const Field f = backward(spectral_noise(g, 1.0, 4, seed));
  const Field r = backward(forward(f));
  double err = 0.0;
  for (std::size_t i = 0; i < f.data().size(); ++i) {
    err = std::max(err, std::abs(f.data()[i] - r.data()[i]));
  }
  return err / std::max(f.max_abs(), 1e-300);
}

double leray_divergence(const Grid& g, std::uint64_t seed) {
  const Spectrum v = spectral_noise(g, 1.0, 4, seed);
  return sobolev_norm(divergence(leray_project(v)), 0) / sobolev_norm(gradient(v), 0);
}

double determinant_relative(const Spectrum& eta) {
  const DeformationPack pack = build_pack(eta);
  return det_expansion_residual(eta) / sobolev_norm(pack.jac, 0);
}

double manufactured_pressure(const Grid& g, std::uint64_t seed, bool fault) {
  const Spectrum eta = spectral_noise(g, 0.005, 3, seed);
  const DeformationPack pack = incompressible_pack(eta);
  Spectrum q = spectral_noise(g, 1.0, 3, seed + 1).component(0);
  Spectrum rhs = a_laplacian(pack, q);
  if (fault) {
    Spectrum junk = spectral_noise(g, 1e-3 * sobolev_norm(rhs, 0), 2, seed + 2).component(0);
    junk.comp(0)[0] = 0.0;
    rhs += junk;
  }
  const PressureSolve ps = pressure_solve(pack, rhs, 1e-13, 200);
  return sobolev_norm(ps.q - q, 0) / sobolev_norm(q, 0);
}

double dispersion_error() {
  struct Case {
    double rho, visc, stiff, a;
  };
  const Case cases[] = {{1, 1, 1, 1}, {1, 4, 1, 1}, {1, 2, 1, 1}, {2, 0.5, 3, 9}, {1, 1, 1, 5}};
  double worst = 0.0;
  for (const Case& c : cases) {
    const auto roots = characteristic_roots(c.rho, c.visc, c.stiff, c.a);
    const Complex x0(0.3, -0.2), v0(0.7, 0.1);
    const double t = 2.0;
    const ModeEvolution exact = evolve_mode(roots, c.a, x0, v0, t);
    const ModeEvolution num = integrate_mode(c.rho, c.visc, c.stiff, c.a, x0, v0, t, 20000);
    const double scale = std::abs(x0) + std::abs(v0);
    worst = std::max({worst, std::abs(exact.eta - num.eta) / scale,
                      std::abs(exact.u - num.u) / scale});
  }
  return worst;
}

}  // namespace

bool OracleReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const OracleCheck& c) { return c.pass; });
}

nlohmann::json OracleReport::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& c : checks) {
    list.push_back({{"name", c.name},
                    {"value", c.value},
                    {"tolerance", c.tolerance},
                    {"trials", c.trials},
                    {"pass", c.pass}});
  }
  return {{"schema", kSummarySchema},
          {"command", "oracle"},
          {"pass", pass()},
          {"inject_fault", inject_fault},
          {"checks", list}};
}

OracleReport run_oracles(const ExperimentConfig& c) {
  const Grid& g = c.grid;
  const int trials = c.oracle_trials;
  const std::uint64_t seed = c.initial.seed;
  OracleReport rep;
  rep.inject_fault = c.oracle_inject_fault;

  double fft = 0.0, leray = 0.0, piola = 0.0, det = 0.0, pressure = 0.0;
  for (int i = 0; i < trials; ++i) {
    const std::uint64_t s = seed * 1000 + std::uint64_t(i);
    fft = std::max(fft, fft_round_trip(g, s));
    leray = std::max(leray, leray_divergence(g, s));
    const Spectrum eta = spectral_noise(g, 0.02, 4, s);
    piola = std::max(piola, piola_residual(build_pack(eta)));
    det = std::max(det, determinant_relative(eta));
  }
  const int pressure_trials = std::min(trials, 5);
  for (int i = 0; i < pressure_trials; ++i) {
    pressure = std::max(pressure, manufactured_pressure(g, seed * 1000 + 500 + std::uint64_t(i),
                                                        c.oracle_inject_fault));
  }
  rep.checks.push_back(make_check("fft_round_trip", fft, 1e-13, trials));
  rep.checks.push_back(make_check("leray_divergence", leray, 1e-13, trials));
  rep.checks.push_back(make_check("piola_identity", piola, 1e-10, trials));
  rep.checks.push_back(make_check("determinant_expansion", det, 1e-10, trials));
  rep.checks.push_back(make_check("manufactured_pressure", pressure, 1e-9, pressure_trials));
  rep.checks.push_back(make_check("mode_dispersion", dispersion_error(), 1e-10, 5));
  return rep;
}

OracleReport cmd_oracle(const ExperimentConfig& c) {
  c.validate();
  const fs::path out = c.out_dir;
  fs::create_directories(out);
  OracleReport rep = run_oracles(c);
  nlohmann::json j = rep.to_json();
  j["config_hash"] = config_hash(c);
  j["code_version"] = code_version();
  j["config"] = to_json(c);
  j["status"] = rep.pass() ? "ok" : "fail";
  j["error"] = nullptr;
  write_json(out / "summary.json", j);
  RunManifest m;
  m.config_hash = config_hash(c);
  m.code_version = code_version();
  m.files["summary"] = "summary.json";
  m.status = rep.pass() ? "ok" : "fail";
  write_manifest(out, m);
  return rep;
}

}  // namespace visco::experiment
