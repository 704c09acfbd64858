#include <omp.h>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "visco/errors.hpp"
#include "visco/experiment/config.hpp"
#include "visco/experiment/oracle.hpp"
#include "visco/experiment/runner.hpp"

namespace vx = visco::experiment;

namespace {

struct Overrides {
  std::string config;
  std::string out_dir;
  std::vector<double> kappa;
  std::string grid;
  std::optional<double> t_final;
  std::optional<double> dt;
  std::optional<int> order;
  std::optional<long> seed;
  std::optional<bool> parallel;
  bool inject_fault = false;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config, "TOML configuration file");
  sub->add_option("--out-dir", o.out_dir, "output directory");
  sub->add_option("--kappa", o.kappa, "elasticity coefficient (comma list for sweep)")
      ->delimiter(',');
  sub->add_option("--grid", o.grid, "grid size N or N1xN2xN3");
  sub->add_option("--t-final", o.t_final, "final time");
  sub->add_option("--dt", o.dt, "maximum time step");
  sub->add_option("--order", o.order, "time order (1 or 2)");
  sub->add_option("--seed", o.seed, "seed of the random initial data");
  sub->add_flag("--parallel,!--serial", o.parallel, "run sweep members concurrently");
}

visco::Grid parse_grid(const std::string& s, visco::Dealias d) {
  int n[3];
  char x1 = 0, x2 = 0;
  std::istringstream is(s);
  is >> n[0];
  if (!is) throw visco::ConfigError("--grid: expected N or N1xN2xN3");
  if (is >> x1) {
    is >> n[1] >> x2 >> n[2];
    if (!is || x1 != 'x' || x2 != 'x') throw visco::ConfigError("--grid: expected N1xN2xN3");
  } else {
    n[1] = n[2] = n[0];
  }
  try {
    return visco::Grid(n[0], n[1], n[2], d);
  } catch (const visco::ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw visco::ConfigError(e.what());
  }
}

vx::ExperimentConfig resolve(const Overrides& o, vx::Kind kind) {
  vx::ExperimentConfig c = o.config.empty() ? vx::ExperimentConfig{} : vx::load_config(o.config);
  c.experiment = kind;
  if (!o.out_dir.empty()) c.out_dir = o.out_dir;
  if (!o.kappa.empty()) {
    if (kind == vx::Kind::Sweep) {
      c.sweep_kappa = o.kappa;
    } else if (o.kappa.size() == 1) {
      c.kappa = o.kappa.front();
    } else {
      throw visco::ConfigError("--kappa takes a list only for sweep");
    }
  }
  if (!o.grid.empty()) c.grid = parse_grid(o.grid, c.grid.dealias);
  if (o.t_final) c.t_final = *o.t_final;
  if (o.dt) c.scheme.dt_max = *o.dt;
  if (o.order) c.scheme.order = *o.order;
  if (o.seed) {
    if (*o.seed < 0) throw visco::ConfigError("--seed must be nonnegative");
    c.initial.seed = std::uint64_t(*o.seed);
  }
  if (o.parallel) c.parallel = *o.parallel;
  if (o.inject_fault) c.oracle_inject_fault = true;
  c.validate();
  return c;
}

void print_outcome(const vx::CommandResult& r, const vx::ExperimentConfig& c) {
  std::cout << r.summary.value("command", "?") << ": status " << r.summary.value("status", "?")
            << ", output in " << c.out_dir.string() << '\n';
  if (r.error) {
    const auto& e = r.summary["error"];
    if (e.is_object()) std::cerr << e.value("kind", "Error") << ": " << e.value("message", "") << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("VISCO_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) omp_set_num_threads(n);
  }

  CLI::App app{"Lagrangian viscoelastic flow solver and experiment driver"};
  app.require_subcommand(1);
  Overrides o;
  std::string report_dir;

  struct Sub {
    const char* name;
    const char* help;
    vx::Kind kind;
  };
  const Sub subs[] = {
      {"run", "advance one configuration and record diagnostics", vx::Kind::Run},
      {"sweep", "run one configuration for several kappa values", vx::Kind::Sweep},
      {"compare-linear", "compare against the closed-form linear solution", vx::Kind::CompareLinear},
      {"straighten", "track the straightening observable", vx::Kind::Straighten},
      {"drift", "track the drift residual", vx::Kind::Drift},
      {"oracle", "run the identity and closed-form checks", vx::Kind::Oracle},
  };
  std::vector<std::pair<CLI::App*, vx::Kind>> commands;
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(sub, o);
    if (s.kind == vx::Kind::Oracle) {
      sub->add_flag("--inject-fault", o.inject_fault, "perturb one check so that it must fail");
    }
    commands.emplace_back(sub, s.kind);
  }
  CLI::App* report = app.add_subcommand("report", "summarize a finished output directory");
  report->add_option("dir", report_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (report->parsed()) {
      std::cout << vx::cmd_report(report_dir);
      return 0;
    }
    for (auto& [sub, kind] : commands) {
      if (!sub->parsed()) continue;
      const vx::ExperimentConfig c = resolve(o, kind);
      if (kind == vx::Kind::Oracle) {
        const vx::OracleReport rep = vx::cmd_oracle(c);
        for (const auto& chk : rep.checks) {
          std::printf("%-24s %s  worst %.3e  tol %.1e\n", chk.name.c_str(),
                      chk.pass ? "PASS" : "FAIL", chk.value, chk.tolerance);
        }
        return rep.pass() ? 0 : 6;
      }
      vx::CommandResult r;
      switch (kind) {
        case vx::Kind::Run: r = vx::cmd_run(c); break;
        case vx::Kind::Sweep: r = vx::cmd_sweep(c); break;
        case vx::Kind::CompareLinear: r = vx::cmd_compare_linear(c); break;
        case vx::Kind::Straighten: r = vx::cmd_straighten(c); break;
        case vx::Kind::Drift: r = vx::cmd_drift(c); break;
        case vx::Kind::Oracle: break;
      }
      print_outcome(r, c);
      return vx::exit_code(r.error);
    }
  } catch (const visco::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (...) {
    const auto e = std::current_exception();
    try {
      std::rethrow_exception(e);
    } catch (const std::exception& ex) {
      std::cerr << vx::error_kind(e) << ": " << ex.what() << '\n';
    }
    return vx::exit_code(e);
  }
  return 0;
}
