#include <benchmark/benchmark.h>

#include <random>

#include "visco/incompressible.hpp"
#include "visco/kernels.hpp"

using namespace visco;
using kernels::Exec;

namespace {

std::vector<double> noise(std::size_t n, double scale, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-scale, scale);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

Spectrum spectral_noise(const Grid& g, int comps, unsigned seed) {
  Spectrum s(g, comps);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  for (auto& z : s.data()) z = Complex(d(rng), d(rng)) * 1e-3;
  return s;
}

Exec exec_of(const benchmark::State& state) { return state.range(1) ? Exec::Parallel : Exec::Serial; }

void label(benchmark::State& state) {
  state.SetLabel(state.range(1) ? "parallel" : "serial");
}

void BM_CofactorJacobian(benchmark::State& state) {
  const int n = int(state.range(0));
  const std::size_t pts = std::size_t(n) * n * n;
  const auto grad = noise(9 * pts, 0.1, 1);
  std::vector<double> cof(9 * pts), jac(pts);
  for (auto _ : state) {
    kernels::cofactor_jacobian(grad, cof, jac, pts, exec_of(state));
    benchmark::DoNotOptimize(jac.data());
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(pts));
  label(state);
}

void BM_Contract(benchmark::State& state) {
  const int n = int(state.range(0));
  const std::size_t pts = std::size_t(n) * n * n;
  const auto mat = noise(9 * pts, 1.0, 2);
  const auto vec = noise(3 * pts, 1.0, 3);
  std::vector<double> out(3 * pts);
  for (auto _ : state) {
    kernels::contract(mat, vec, out, pts, false, exec_of(state));
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(pts));
  label(state);
}

void BM_ImplicitModeSolve(benchmark::State& state) {
  const Grid g = Grid::cube(int(state.range(0)));
  const Spectrum eta0 = spectral_noise(g, 3, 4), u0 = spectral_noise(g, 3, 5), f = spectral_noise(g, 3, 6);
  const kernels::StiffCoefficients c{1.0, 1.0, 1.0, 1.0, 1.0};
  for (auto _ : state) {
    Spectrum eta = eta0, u = u0;
    kernels::implicit_mode_solve(c, 0.01, 2, eta, u, f, exec_of(state));
    benchmark::DoNotOptimize(u.data().data());
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(g.modes()));
  label(state);
}

}  // namespace

BENCHMARK(BM_CofactorJacobian)->ArgsProduct({{24, 48}, {0, 1}});
BENCHMARK(BM_Contract)->ArgsProduct({{24, 48}, {0, 1}});
BENCHMARK(BM_ImplicitModeSolve)->ArgsProduct({{16, 32}, {0, 1}});

BENCHMARK_MAIN();
