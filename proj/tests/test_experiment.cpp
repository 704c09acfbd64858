#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "test_util.hpp"
#include "visco/errors.hpp"
#include "visco/experiment/config.hpp"
#include "visco/experiment/initial_data.hpp"
#include "visco/experiment/oracle.hpp"
#include "visco/experiment/output.hpp"
#include "visco/experiment/runner.hpp"
#include "visco/spectral/fft.hpp"
#include "visco/spectral/operators.hpp"

using namespace visco;
using namespace visco::experiment;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "visco_tests" / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_config(const std::string& name) {
  ExperimentConfig c;
  c.grid = Grid::cube(8);
  c.t_final = 0.2;
  c.sample_interval = 0.05;
  c.scheme.dt_max = 0.01;
  c.scheme.fixed_dt = true;
  c.out_dir = scratch(name);
  return c;
}

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig c = parse_config(R"(
name = "demo"
experiment = "sweep"
model = "compressible"
t_final = 3.0
sample_interval = 0.5
[grid]
n = 12
dealias = "pad2x"
[params]
kappa = 4.0
pressure_gamma = 1.4
[scheme]
dt = 0.002
order = 1
[initial]
seed = 9
[initial.eta]
kind = "composed"
shears = [{component = 0, axis = 1, amplitude = 0.1}, {component = 2, axis = 0, amplitude = 0.05, wavenumber = 2}]
[initial.u]
kind = "random"
amplitude = 0.3
kmax = 3
mean = [0.0, 0.0, 0.25]
[sweep]
kappa = [1, 2.5]
)");
  CHECK(c.name == "demo");
  CHECK(c.experiment == Kind::Sweep);
  CHECK(c.model == Model::Compressible);
  CHECK(c.grid.n2 == 12);
  CHECK(c.grid.dealias == Dealias::Pad2x);
  CHECK(c.kappa == 4.0);
  CHECK(c.pressure_gamma == 1.4);
  CHECK(c.scheme.dt_max == 0.002);
  CHECK(c.scheme.order == 1);
  CHECK(c.initial.seed == 9);
  REQUIRE(c.initial.shears.size() == 2);
  CHECK(c.initial.shears[1].wavenumber == 2);
  CHECK(c.initial.u.kind == VelocityKind::Random);
  CHECK(c.initial.u.mean[2] == 0.25);
  CHECK(c.sweep_kappa == std::vector<double>{1.0, 2.5});
  CHECK_NOTHROW(c.validate());

  CHECK_THROWS_AS(parse_config("t_finale = 2.0"), ConfigError);
  CHECK_THROWS_AS(parse_config("[params]\nkapa = 1"), ConfigError);
  CHECK_THROWS_AS(parse_config("t_final = = 2"), ConfigError);
  CHECK_THROWS_AS(parse_config("[grid]\nn = 7"), ConfigError);
  CHECK_THROWS_AS(parse_config("model = \"maxwell\""), ConfigError);
  CHECK_THROWS_AS(parse_config("t_final = 0.0").validate(), ConfigError);
  CHECK_THROWS_AS(parse_config("t_final = 1.0\nsample_interval = 2.0").validate(), ConfigError);
  CHECK_THROWS_AS(parse_config("experiment = \"sweep\"").validate(), ConfigError);
  CHECK_THROWS_AS(parse_config("[params]\nmu = -1.0").validate(), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/visco.toml"), ConfigError);
}

TEST_CASE("config hash") {
  ExperimentConfig a, b;
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.kappa = 2.0;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(to_json(a)["params"]["kappa"] == 1.0);
}

TEST_CASE("spectral noise") {
  const Grid g = Grid::cube(16);
  const Spectrum a = spectral_noise(g, 1.0, 4, 3), b = spectral_noise(g, 1.0, 4, 3);
  CHECK(testing::max_abs_diff(a, b) == 0.0);
  CHECK(testing::max_abs_diff(a, spectral_noise(g, 1.0, 4, 4)) > 0.1);
  for (int c = 0; c < 3; ++c) CHECK(a.mean(c) == 0.0);
  CHECK(a.mode(0, 5, 0, 0) == Complex(0.0));
  CHECK(std::abs(a.mode(0, 1, 0, 0)) > 0.0);

  // a coarser grid sees the same coefficients
  const Spectrum c8 = spectral_noise(Grid::cube(8), 1.0, 3, 11), c16 = spectral_noise(g, 1.0, 3, 11);
  CHECK(std::abs(c8.mode(1, 1, -2, 3) - c16.mode(1, 1, -2, 3)) < 1e-15);

  // the projected random recipe is divergence free
  VelocityRecipe r;
  r.kind = VelocityKind::Random;
  r.amplitude = 1.0;
  const Spectrum u = velocity_spec(g, r, 5);
  CHECK(sobolev_norm(divergence(u), 0) < 1e-13 * sobolev_norm(u, 1));
}

TEST_CASE("initial data recipes") {
  ExperimentConfig c = small_config("initial");
  c.initial.eta_kind = EtaKind::Shear;
  c.initial.shears = {Shear{0, 1, 0.2, 1, 0}};
  c.initial.u.kind = VelocityKind::Abc;
  c.initial.u.amplitude = 0.1;
  c.initial.u.mean = {0.1, 0.0, -0.2};
  const InitialData d = build_initial_data(c);
  const DeformationPack pack = incompressible_pack(d.eta0);
  Spectrum div = a_divergence(pack, d.u0);
  CHECK(sobolev_norm(div, 0) < 1e-9);
  CHECK(d.u0.mean(0) == doctest::Approx(0.1));
  CHECK(d.u0.mean(2) == doctest::Approx(-0.2));

  c.initial.u.kind = VelocityKind::Mode;
  c.initial.u.k = {0, 5, 0};
  CHECK_THROWS_AS(build_initial_data(c), ConfigError);
}

TEST_CASE("csv and svg output") {
  const fs::path dir = scratch("csv");
  CsvTable t({"a", "b"});
  t.add_row({1.0, 0.1});
  t.add_row({2.0, 1.0 / 3.0});
  CHECK_THROWS_AS(t.add_row({1.0}), Error);
  t.write(dir / "t.csv");
  const CsvTable r = read_csv(dir / "t.csv");
  CHECK(r.columns() == t.columns());
  CHECK(r.column("b")[1] == 1.0 / 3.0);
  CHECK(slurp(dir / "t.csv").rfind("a,b\n", 0) == 0);

  PlotSpec p;
  p.title = "x < y";
  p.series = {{"s", {0.0, 1.0, 2.0}, {1.0, 0.1, 0.0}}};
  const std::string svg = render_svg(p);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("x &lt; y") != std::string::npos);
  CHECK(svg.find("nan") == std::string::npos);
}

TEST_CASE("manifest refuses missing files") {
  const fs::path dir = scratch("manifest");
  fs::create_directories(dir);
  RunManifest m;
  m.files["x"] = "missing.csv";
  CHECK_THROWS_AS(write_manifest(dir, m), Error);
  CHECK_FALSE(fs::exists(dir / "manifest.json"));
}

TEST_CASE("checkpoint round trip") {
  const fs::path dir = scratch("checkpoint");
  const Grid g = Grid::cube(8);
  const Spectrum eta = testing::random_band_limited(g, 3, 2, 0.1, 1);
  const Spectrum u = testing::random_band_limited(g, 3, 2, 0.1, 2);
  const CheckpointFiles f = write_checkpoint(dir, "c", eta, u, 1.5, 42, {{"kappa", 2.0}});
  const Checkpoint c = read_checkpoint(dir / f.sidecar);
  CHECK(c.t == 1.5);
  CHECK(c.steps == 42);
  CHECK(testing::max_abs_diff(c.eta, eta) < 1e-15);
  CHECK(testing::max_abs_diff(c.u, u) < 1e-15);
  CHECK(c.sidecar["extra"]["kappa"] == 2.0);
}

TEST_CASE("sample times") {
  CHECK(sample_times(1.0, 0.25) == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  const auto t = sample_times(1.0, 0.3);
  CHECK(t.size() == 5);
  CHECK(t.back() == 1.0);
  CHECK(loglog_slope({1, 2, 4}, {1, 0.5, 0.25}) == doctest::Approx(-1.0));
  CHECK_THROWS(loglog_slope({1, 2}, {1, 0}));
}

TEST_CASE("rest state run") {
  ExperimentConfig c = small_config("rest");
  const CommandResult r = cmd_run(c);
  CHECK(exit_code(r.error) == 0);
  const CsvTable t = read_csv(c.out_dir / "diagnostics.csv");
  CHECK(t.rows().size() == 5);
  for (const char* col : {"u_h2", "grad_eta_h2", "E", "D", "etabar_l2", "drift_h3"}) {
    for (double v : t.column(col)) CHECK(v == 0.0);
  }
  CHECK(t.column("t").back() == 0.2);
  const auto man = read_json(c.out_dir / "manifest.json");
  CHECK(man["status"] == "ok");
  for (const auto& [role, rel] : man["files"].items()) {
    CHECK(fs::exists(c.out_dir / rel.get<std::string>()));
    CHECK(fs::last_write_time(c.out_dir / rel.get<std::string>()) <=
          fs::last_write_time(c.out_dir / "manifest.json"));
  }
  CHECK(read_json(c.out_dir / "summary.json")["schema"] == kSummarySchema);
  CHECK_NOTHROW(cmd_report(c.out_dir));
}

TEST_CASE("shear plus velocity run has monotone energy and is deterministic") {
  ExperimentConfig c = small_config("shear_a");
  c.kappa = 2.0;
  c.initial.eta_kind = EtaKind::Shear;
  c.initial.shears = {Shear{0, 1, 0.1, 1, 0}};
  c.initial.u.kind = VelocityKind::Abc;
  c.initial.u.amplitude = 0.1;
  c.checkpoint_interval = 0.1;
  const CommandResult r = cmd_run(c);
  REQUIRE(exit_code(r.error) == 0);
  const auto E = read_csv(c.out_dir / "diagnostics.csv").column("E");
  for (std::size_t i = 1; i < E.size(); ++i) CHECK(E[i] <= E[i - 1]);
  CHECK(r.manifest.checkpoints.size() == 9);

  ExperimentConfig c2 = c;
  c2.out_dir = scratch("shear_b");
  cmd_run(c2);
  CHECK(slurp(c.out_dir / "diagnostics.csv") == slurp(c2.out_dir / "diagnostics.csv"));
}

TEST_CASE("huge amplitude at tiny kappa fails with a solver error") {
  ExperimentConfig c = small_config("huge");
  c.kappa = 0.01;
  c.scheme.dt_max = 0.05;
  c.initial.eta_kind = EtaKind::Shear;
  c.initial.shears = {Shear{0, 1, 1.5, 1, 0}};
  c.initial.u.kind = VelocityKind::Abc;
  c.initial.u.amplitude = 20.0;
  const CommandResult r = cmd_run(c);
  const int code = exit_code(r.error);
  CHECK((code == 4 || code == 5));
  CHECK(read_json(c.out_dir / "manifest.json")["status"] == "error");
}

TEST_CASE("sweep determinism and parallel equivalence") {
  ExperimentConfig c = small_config("sweep_par");
  c.experiment = Kind::Sweep;
  c.t_final = 0.1;
  c.initial.u.kind = VelocityKind::Mode;
  c.initial.u.amplitude = 0.05;
  c.initial.u.k = {0, 0, 1};
  c.sweep_kappa = {1.0, 3.0, 3.0};
  c.parallel = true;
  const CommandResult a = cmd_sweep(c);
  REQUIRE(exit_code(a.error) == 0);
  const CsvTable t = read_csv(c.out_dir / "sweep.csv");
  CHECK(t.rows()[1] == t.rows()[2]);

  ExperimentConfig s = c;
  s.parallel = false;
  s.out_dir = scratch("sweep_ser");
  cmd_sweep(s);
  CHECK(slurp(c.out_dir / "sweep.csv") == slurp(s.out_dir / "sweep.csv"));
  CHECK(a.summary["slopes"]["etabar_l2_sq_final"].is_number());
}

TEST_CASE("compare-linear with zero displacement starts on the linear data") {
  ExperimentConfig c = small_config("compare");
  c.initial.u.kind = VelocityKind::Abc;
  c.initial.u.amplitude = 0.01;
  const CommandResult r = cmd_compare_linear(c);
  REQUIRE(exit_code(r.error) == 0);
  CHECK(r.summary["correctors"]["eta_r_h3"] == 0.0);
  CHECK(r.summary["correctors"]["u_r_h2"] == 0.0);
  const auto dev = read_csv(c.out_dir / "deviation.csv").column("combined");
  CHECK(dev.front() < 1e-30);
  CHECK(dev.back() > 0.0);

  ExperimentConfig k = c;
  k.model = Model::Compressible;
  k.initial.eta_kind = EtaKind::Shear;
  k.initial.shears = {Shear{0, 1, 0.05, 1, 0}};
  k.out_dir = scratch("compare_comp");
  const CommandResult rc = cmd_compare_linear(k);
  REQUIRE(exit_code(rc.error) == 0);
  CHECK(read_csv(k.out_dir / "deviation.csv").column("combined").front() < 1e-30);
}

TEST_CASE("oracle suite") {
  ExperimentConfig c;
  c.out_dir = scratch("oracle");
  c.oracle_trials = 3;
  CHECK(cmd_oracle(c).pass());
  c.grid = Grid::cube(8);
  CHECK(run_oracles(c).pass());
  c.oracle_inject_fault = true;
  const OracleReport bad = run_oracles(c);
  CHECK_FALSE(bad.pass());
  CHECK(bad.to_json()["pass"] == false);
}

TEST_CASE("exit codes") {
  auto code = [](auto ex) { return exit_code(std::make_exception_ptr(ex)); };
  CHECK(exit_code(nullptr) == 0);
  CHECK(code(ConfigError("x")) == 2);
  CHECK(code(SingularMap(-1.0)) == 3);
  CHECK(code(NoConvergence(3, 1.0)) == 4);
  CHECK(code(StepRejected("x")) == 5);
  CHECK(code(std::runtime_error("x")) == 1);
}
