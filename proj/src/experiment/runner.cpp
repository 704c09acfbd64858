#include "visco/experiment/runner.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>

#include "visco/decay_fit.hpp"
#include "visco/errors.hpp"
#include "visco/experiment/initial_data.hpp"
#include "visco/linear_reference.hpp"
#include "visco/spectral/operators.hpp"

namespace visco::experiment {

namespace {

double compressible_dt(const CompressibleState& s, const SchemeConfig& cfg) {
  if (cfg.fixed_dt) return cfg.dt_max;
  return std::min(cfg.dt_max, cfg.cfl / (velocity_gradient_sup(s.u) + 1.0));
}

nlohmann::json record_json(const DiagnosticsRecord& r) {
  nlohmann::json j = nlohmann::json::object();
  const auto cols = DiagnosticsRecord::columns();
  const auto vals = r.values();
  for (std::size_t i = 0; i < cols.size(); ++i) j[cols[i]] = vals[i];
  return j;
}

std::string stem_for(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "ckpt_%04zu", index);
  return buf;
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& v) {
  double s = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) s += 0.5 * (t[i] - t[i - 1]) * (v[i] + v[i - 1]);
  return s;
}

template <class F>
std::vector<double> collect(const std::vector<DiagnosticsRecord>& rs, F&& f) {
  std::vector<double> out;
  out.reserve(rs.size());
  for (const auto& r : rs) out.push_back(f(r));
  return out;
}

nlohmann::json error_json(const std::exception_ptr& e) {
  if (!e) return nullptr;
  std::string message;
  try {
    std::rethrow_exception(e);
  } catch (const std::exception& ex) {
    message = ex.what();
  } catch (...) {
    message = "unknown error";
  }
  return {{"kind", error_kind(e)}, {"message", message}, {"exit_code", exit_code(e)}};
}

nlohmann::json tail_fit_json(const std::vector<double>& t, const std::vector<double>& v) {
  if (t.size() < 20) return nullptr;
  try {
    const DecayFit f = fit_decay_rate_tail(t, v);
    return {{"t_a", f.t_a}, {"t_b", f.t_b}, {"rate", f.rate}, {"intercept", f.intercept},
            {"r2", f.r2}, {"samples", f.samples}};
  } catch (const Error&) {
    return nullptr;
  }
}

nlohmann::json summary_base(const ExperimentConfig& c, const char* command, const Trajectory& tr) {
  nlohmann::json s = {{"schema", kSummarySchema},
                      {"command", command},
                      {"code_version", code_version()},
                      {"config_hash", config_hash(c)},
                      {"config", to_json(c)},
                      {"status", tr.error ? "error" : "ok"},
                      {"error", error_json(tr.error)},
                      {"samples", tr.records.size()},
                      {"wall_seconds", tr.wall_seconds}};
  s["initial"] = {{"i0h", tr.initial_i0h},
                  {"kappa_threshold", kappa_threshold(tr.initial_i0h)},
                  {"kappa", c.kappa}};
  if (!tr.records.empty()) {
    s["t_reached"] = tr.records.back().t;
    s["steps"] = tr.steps.back();
    s["final"] = record_json(tr.records.back());

    double worst_rise = 0.0, worst_j = 0.0, mean_shift = 0.0;
    const auto& r0 = tr.records.front();
    for (std::size_t i = 0; i < tr.records.size(); ++i) {
      const auto& r = tr.records[i];
      if (i > 0) {
        const auto& p = tr.records[i - 1];
        const double scale = std::max(p.E, 1e-300);
        worst_rise = std::max(worst_rise, (r.E - p.E) / scale / std::max(r.t - p.t, 1e-300));
      }
      worst_j = std::max({worst_j, std::abs(r.min_j - 1.0), std::abs(r.max_j - 1.0)});
      for (int k = 0; k < 3; ++k) mean_shift = std::max(mean_shift, std::abs(r.u_mean[k] - r0.u_mean[k]));
    }
    const double mean_scale = std::max({std::abs(r0.u_mean[0]), std::abs(r0.u_mean[1]),
                                        std::abs(r0.u_mean[2]), 1e-300});
    s["checks"] = {{"max_energy_rise_rate", worst_rise},
                   {"max_jacobian_deviation", worst_j},
                   {"max_mean_velocity_shift", mean_shift},
                   {"max_mean_velocity_shift_rel", mean_shift / mean_scale}};
  }
  return s;
}

CommandResult finish(const fs::path& out, nlohmann::json summary, RunManifest m,
                     const Trajectory* tr) {
  if (tr) {
    m.checkpoints = tr->checkpoints;
    m.timings["simulate"] = tr->wall_seconds;
  }
  write_json(out / "summary.json", summary);
  m.files["summary"] = "summary.json";
  m.status = summary.value("status", "ok");
  write_manifest(out, m);
  return {summary, m, tr ? tr->error : nullptr};
}

RunManifest manifest_for(const ExperimentConfig& c) {
  RunManifest m;
  m.config_hash = config_hash(c);
  m.code_version = code_version();
  return m;
}

PlotSpec time_plot(const std::string& title, const std::string& y_label,
                   const std::vector<DiagnosticsRecord>& rs,
                   std::vector<std::pair<std::string, std::vector<double>>> ys) {
  PlotSpec p;
  p.title = title;
  p.x_label = "t";
  p.y_label = y_label;
  const auto t = collect(rs, [](const DiagnosticsRecord& r) { return r.t; });
  for (auto& [label, y] : ys) p.series.push_back({label, t, std::move(y)});
  return p;
}

}  // namespace

Simulation::Simulation(const ExperimentConfig& c) : config_(c) {
  config_.validate();
  initial_ = build_initial_data(config_);
  reference_ = make_reference(initial_.eta0, initial_.u0, config_.kappa);
  if (config_.model == Model::Incompressible) {
    state_ = make_incompressible_state(config_, initial_);
  } else {
    state_ = make_compressible_state(config_, initial_);
  }
}

double Simulation::t() const {
  return std::visit([](const auto& s) { return s.t; }, state_);
}

long Simulation::steps() const {
  return std::visit([](const auto& s) { return s.steps; }, state_);
}

const Spectrum& Simulation::eta() const {
  return std::visit([](const auto& s) -> const Spectrum& { return s.eta; }, state_);
}

const Spectrum& Simulation::u() const {
  return std::visit([](const auto& s) -> const Spectrum& { return s.u; }, state_);
}

void Simulation::advance_to(double target) {
  const SchemeConfig& cfg = config_.scheme;
  const double slack = 1e-12 * std::max(1.0, std::abs(target));
  while (t() < target - slack) {
    const double remaining = target - t();
    double dt = 0.0;
    if (auto* s = std::get_if<FlowState>(&state_)) {
      dt = choose_dt(*s, cfg);
    } else {
      dt = compressible_dt(std::get<CompressibleState>(state_), cfg);
    }
    // equal steps to the target instead of one short final step
    const double n = std::ceil(remaining / dt - 1e-9);
    dt = n <= 1.0 ? remaining : remaining / n;
    if (auto* s = std::get_if<FlowState>(&state_)) {
      step(*s, cfg, dt);
    } else {
      step_compressible(std::get<CompressibleState>(state_), cfg, dt);
    }
    last_dt_ = dt;
    if (n <= 1.0) {
      std::visit([target](auto& s) { s.t = target; }, state_);
    }
  }
}

DiagnosticsRecord Simulation::record() const {
  return std::visit([this](const auto& s) { return visco::record(s, reference_); }, state_);
}

std::vector<double> sample_times(double t_final, double interval) {
  std::vector<double> out;
  for (long k = 0;; ++k) {
    const double t = double(k) * interval;
    if (t >= t_final * (1.0 - 1e-12)) break;
    out.push_back(t);
  }
  out.push_back(t_final);
  return out;
}

LinearComparison::LinearComparison(const ExperimentConfig& c, const InitialData& d) : config_(c) {
  if (c.model == Model::Incompressible) {
    const DeformationPack pack0 = incompressible_pack(d.eta0, c.scheme.j_floor);
    const AdjustedData adj = build_adjusted_initial_data(d.eta0, d.u0, pack0);
    eta0_ = adj.eta;
    u0_ = adj.u;
    auto ratio = [](double a, double b) -> nlohmann::json {
      if (b > 0.0) return a / b;
      return nullptr;
    };
    correctors_ = {{"eta_r_h3", adj.eta_r_h3},
                   {"grad_eta0_h2_sq", adj.grad_eta0_h2_sq},
                   {"eta_ratio", ratio(adj.eta_r_h3, adj.grad_eta0_h2_sq)},
                   {"u_r_h2", adj.u_r_h2},
                   {"grad_eta0_u0", adj.grad_eta0_u0},
                   {"u_ratio", ratio(adj.u_r_h2, adj.grad_eta0_u0)},
                   {"residual_div_eta", adj.residual_div_eta},
                   {"residual_div_u", adj.residual_div_u}};
  } else {
    eta0_ = d.eta0;
    u0_ = d.u0;
  }
}

LinearState LinearComparison::at(double t) const {
  if (config_.model == Model::Incompressible) {
    return solve_linear_incompressible(eta0_, u0_, t, config_.flow_params());
  }
  return solve_linear_compressible(eta0_, u0_, t, config_.compressible_params());
}

DeviationNorms LinearComparison::deviation(const Simulation& sim) const {
  const LinearState lin = at(sim.t());
  return deviation_norms(sim.u(), sim.eta(), lin.u, lin.eta, config_.kappa);
}

CsvTable Trajectory::diagnostics_table() const {
  auto cols = DiagnosticsRecord::columns();
  cols.push_back("dt");
  cols.push_back("steps");
  CsvTable t(cols);
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto row = records[i].values();
    row.push_back(dt[i]);
    row.push_back(double(steps[i]));
    t.add_row(row);
  }
  return t;
}

CsvTable Trajectory::deviation_table() const {
  CsvTable t({"t", "u_dev_h2_sq", "kappa_eta_dev_h3_sq", "combined"});
  for (std::size_t i = 0; i < deviation.size(); ++i) {
    t.add_row({records[i].t, deviation[i].u, deviation[i].eta, deviation[i].combined});
  }
  return t;
}

Trajectory simulate(const ExperimentConfig& c, bool compare_linear, const fs::path& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  Trajectory tr;
  try {
    Simulation sim(c);
    tr.initial_i0h = i0h(sim.initial().u0, sim.initial().eta0, c.kappa);
    std::optional<LinearComparison> lin;
    if (compare_linear) {
      lin.emplace(c, sim.initial());
      tr.correctors = lin->correctors();
    }
    const bool checkpoints = c.checkpoint_interval > 0.0 && !out_dir.empty();
    long next_checkpoint = 0;
    for (double ts : sample_times(c.t_final, c.sample_interval)) {
      sim.advance_to(ts);
      tr.records.push_back(sim.record());
      tr.dt.push_back(sim.last_dt());
      tr.steps.push_back(sim.steps());
      if (lin) tr.deviation.push_back(lin->deviation(sim));
      if (checkpoints && ts >= double(next_checkpoint) * c.checkpoint_interval * (1 - 1e-12)) {
        const nlohmann::json extra = {{"config_hash", config_hash(c)},
                                      {"model", to_string(c.model)},
                                      {"kappa", c.kappa}};
        const CheckpointFiles f = write_checkpoint(out_dir, stem_for(std::size_t(next_checkpoint)),
                                                   sim.eta(), sim.u(), sim.t(), sim.steps(), extra);
        tr.checkpoints.insert(tr.checkpoints.end(), {f.eta, f.u, f.sidecar});
        while (double(next_checkpoint) * c.checkpoint_interval <= ts * (1 + 1e-12)) ++next_checkpoint;
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    tr.error = std::current_exception();
  }
  tr.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return tr;
}

CommandResult cmd_run(const ExperimentConfig& c) {
  c.validate();
  const fs::path out = c.out_dir;
  fs::create_directories(out);
  const Trajectory tr = simulate(c, false, out);
  RunManifest m = manifest_for(c);

  tr.diagnostics_table().write(out / "diagnostics.csv");
  m.records.push_back("diagnostics.csv");

  nlohmann::json s = summary_base(c, "run", tr);
  const auto t = collect(tr.records, [](const DiagnosticsRecord& r) { return r.t; });
  s["stability_fit"] = tail_fit_json(t, collect(tr.records, [](const DiagnosticsRecord& r) {
                                       return r.stability;
                                     }));

  write_svg(out / "energy.svg",
            time_plot("Energy and dissipation", "value", tr.records,
                      {{"E", collect(tr.records, [](const DiagnosticsRecord& r) { return r.E; })},
                       {"D", collect(tr.records, [](const DiagnosticsRecord& r) { return r.D; })}}));
  write_svg(out / "stability.svg",
            time_plot("Stability norm", "||(u_bar, sqrt(kappa) grad eta)||_2", tr.records,
                      {{"stability", collect(tr.records, [](const DiagnosticsRecord& r) {
                          return r.stability;
                        })}}));
  m.files["energy_plot"] = "energy.svg";
  m.files["stability_plot"] = "stability.svg";
  return finish(out, s, m, &tr);
}

CommandResult cmd_compare_linear(const ExperimentConfig& c) {
  c.validate();
  const fs::path out = c.out_dir;
  fs::create_directories(out);
  const Trajectory tr = simulate(c, true, out);
  RunManifest m = manifest_for(c);
  tr.diagnostics_table().write(out / "diagnostics.csv");
  tr.deviation_table().write(out / "deviation.csv");
  m.records = {"diagnostics.csv", "deviation.csv"};

  nlohmann::json s = summary_base(c, "compare-linear", tr);
  s["correctors"] = tr.correctors;
  double worst = 0.0, worst_t = 0.0;
  std::vector<double> t, comb;
  for (std::size_t i = 0; i < tr.deviation.size(); ++i) {
    if (tr.deviation[i].combined > worst) worst = tr.deviation[i].combined, worst_t = tr.records[i].t;
    t.push_back(tr.records[i].t);
    comb.push_back(tr.deviation[i].combined);
  }
  s["deviation"] = {{"sup", worst}, {"t_at_sup", worst_t}, {"fit", tail_fit_json(t, comb)}};
  PlotSpec p = time_plot("Deviation from the linear solution", "norm", tr.records, {});
  p.series.push_back({"combined", t, comb});
  write_svg(out / "deviation.svg", p);
  m.files["deviation_plot"] = "deviation.svg";
  return finish(out, s, m, &tr);
}

CommandResult cmd_straighten(const ExperimentConfig& c) {
  c.validate();
  const fs::path out = c.out_dir;
  fs::create_directories(out);
  const Trajectory tr = simulate(c, false, out);
  RunManifest m = manifest_for(c);
  tr.diagnostics_table().write(out / "diagnostics.csv");
  CsvTable st({"t", "etabar_l2", "etabar_sup", "etabar_l2_sq", "kappa_etabar_l2_sq"});
  std::vector<double> t, sq;
  for (const auto& r : tr.records) {
    const double q = r.etabar_l2 * r.etabar_l2;
    st.add_row({r.t, r.etabar_l2, r.etabar_sup, q, c.kappa * q});
    t.push_back(r.t);
    sq.push_back(q);
  }
  st.write(out / "straighten.csv");
  m.records = {"diagnostics.csv", "straighten.csv"};

  nlohmann::json s = summary_base(c, "straighten", tr);
  if (!tr.records.empty()) {
    const auto& last = tr.records.back();
    s["straightening"] = {{"etabar_l2_final", last.etabar_l2},
                          {"etabar_sup_final", last.etabar_sup},
                          {"etabar_l2_sq_integral", trapezoid(t, sq)},
                          {"kappa_times_etabar_l2_sq_final", c.kappa * sq.back()}};
  }
  write_svg(out / "straighten.svg",
            time_plot("Straightening", "eta_bar", tr.records,
                      {{"||eta_bar||_0", collect(tr.records, [](const DiagnosticsRecord& r) {
                          return r.etabar_l2;
                        })},
                       {"sup |eta_bar|", collect(tr.records, [](const DiagnosticsRecord& r) {
                          return r.etabar_sup;
                        })}}));
  m.files["straighten_plot"] = "straighten.svg";
  return finish(out, s, m, &tr);
}

CommandResult cmd_drift(const ExperimentConfig& c) {
  c.validate();
  const fs::path out = c.out_dir;
  fs::create_directories(out);
  const Trajectory tr = simulate(c, false, out);
  RunManifest m = manifest_for(c);
  tr.diagnostics_table().write(out / "diagnostics.csv");
  CsvTable dt({"t", "drift_l2", "drift_h3", "drift_h3_rel"});
  std::vector<double> t, h3;
  const double h0 = tr.records.empty() ? 0.0 : tr.records.front().drift_h3;
  for (const auto& r : tr.records) {
    dt.add_row({r.t, r.drift_l2, r.drift_h3, h0 > 0 ? r.drift_h3 / h0 : 0.0});
    t.push_back(r.t);
    h3.push_back(r.drift_h3);
  }
  dt.write(out / "drift.csv");
  m.records = {"diagnostics.csv", "drift.csv"};

  nlohmann::json s = summary_base(c, "drift", tr);
  if (!h3.empty()) {
    bool monotone = true;
    for (std::size_t i = h3.size() / 2 + 1; i < h3.size(); ++i) monotone &= h3[i] <= h3[i - 1];
    s["drift"] = {{"initial_h3", h0},
                  {"final_h3", h3.back()},
                  {"ratio", h0 > 0 ? h3.back() / h0 : 0.0},
                  {"monotone_trailing_half", monotone},
                  {"fit", tail_fit_json(t, h3)}};
  }
  write_svg(out / "drift.svg",
            time_plot("Drift residual", "||eta - u0_avg t - varpi||", tr.records,
                      {{"H3", h3}, {"L2", collect(tr.records, [](const DiagnosticsRecord& r) {
                                      return r.drift_l2;
                                    })}}));
  m.files["drift_plot"] = "drift.svg";
  return finish(out, s, m, &tr);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error("loglog_slope: need two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw NonPositiveSamples("loglog_slope: nonpositive value");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (std::abs(den) < 1e-300) throw Error("loglog_slope: x values coincide");
  return (n * sxy - sx * sy) / den;
}

int worker_count(int members, bool parallel) {
  if (!parallel || members <= 1) return 1;
  int cap = omp_get_max_threads();
  if (const char* env = std::getenv("VISCO_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) cap = v;
  }
  return std::clamp(cap, 1, members);
}

CommandResult cmd_sweep(const ExperimentConfig& c) {
  c.validate();
  const fs::path out = c.out_dir;
  fs::create_directories(out);
  const int members = int(c.sweep_kappa.size());
  std::vector<Trajectory> results(static_cast<std::size_t>(members));
  std::vector<ExperimentConfig> configs(static_cast<std::size_t>(members), c);
  for (int i = 0; i < members; ++i) {
    configs[i].kappa = c.sweep_kappa[i];
    configs[i].experiment = Kind::Run;
    configs[i].out_dir = out / ("member_" + std::to_string(i));
  }
  const auto start = std::chrono::steady_clock::now();
  const int workers = worker_count(members, c.parallel);
  std::vector<std::exception_ptr> config_errors(static_cast<std::size_t>(members));
#pragma omp parallel for num_threads(workers) schedule(dynamic, 1)
  for (int i = 0; i < members; ++i) {
    try {
      results[i] = simulate(configs[i], true, configs[i].out_dir);
    } catch (...) {
      config_errors[i] = std::current_exception();
    }
  }
  for (const auto& e : config_errors) {
    if (e) std::rethrow_exception(e);
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  RunManifest m = manifest_for(c);
  CsvTable table({"kappa", "etabar_l2_sq_final", "etabar_l2_sq_integral", "etabar_sup_final",
                  "deviation_sup", "stability_final", "steps"});
  std::exception_ptr first_error;
  nlohmann::json member_json = nlohmann::json::array();
  std::vector<double> kap, sq_final, sq_int, dev_sup;
  for (int i = 0; i < members; ++i) {
    const Trajectory& tr = results[i];
    const std::string dir = "member_" + std::to_string(i);
    fs::create_directories(out / dir);
    tr.diagnostics_table().write(out / dir / "diagnostics.csv");
    tr.deviation_table().write(out / dir / "deviation.csv");
    m.records.push_back(dir + "/diagnostics.csv");
    m.records.push_back(dir + "/deviation.csv");
    for (const auto& p : tr.checkpoints) m.checkpoints.push_back(dir + "/" + p);
    m.timings[dir] = tr.wall_seconds;
    member_json.push_back({{"kappa", c.sweep_kappa[i]},
                           {"status", tr.error ? "error" : "ok"},
                           {"error", error_json(tr.error)},
                           {"dir", dir}});
    if (tr.error) {
      if (!first_error) first_error = tr.error;
      continue;
    }
    std::vector<double> t, sq;
    double dsup = 0.0;
    for (std::size_t k = 0; k < tr.records.size(); ++k) {
      t.push_back(tr.records[k].t);
      sq.push_back(tr.records[k].etabar_l2 * tr.records[k].etabar_l2);
      dsup = std::max(dsup, tr.deviation[k].combined);
    }
    const double integral = trapezoid(t, sq);
    table.add_row({c.sweep_kappa[i], sq.back(), integral, tr.records.back().etabar_sup, dsup,
                   tr.records.back().stability, double(tr.steps.back())});
    kap.push_back(c.sweep_kappa[i]);
    sq_final.push_back(sq.back());
    sq_int.push_back(integral);
    dev_sup.push_back(dsup);
  }
  table.write(out / "sweep.csv");
  m.files["sweep_table"] = "sweep.csv";
  m.timings["sweep"] = wall;

  auto slope = [&](const std::vector<double>& y) -> nlohmann::json {
    try {
      return loglog_slope(kap, y);
    } catch (const Error&) {
      return nullptr;
    }
  };
  nlohmann::json s = {{"schema", kSummarySchema},
                      {"command", "sweep"},
                      {"code_version", code_version()},
                      {"config_hash", config_hash(c)},
                      {"config", to_json(c)},
                      {"status", first_error ? "error" : "ok"},
                      {"error", error_json(first_error)},
                      {"workers", workers},
                      {"wall_seconds", wall},
                      {"matched_time", c.t_final},
                      {"members", member_json},
                      {"slopes",
                       {{"etabar_l2_sq_final", slope(sq_final)},
                        {"etabar_l2_sq_integral", slope(sq_int)},
                        {"deviation_sup", slope(dev_sup)}}}};

  PlotSpec p;
  p.title = "Sweep over kappa";
  p.x_label = "kappa";
  p.y_label = "observable";
  p.log_x = true;
  p.series = {{"||eta_bar||_0^2 at t_final", kap, sq_final},
              {"int ||eta_bar||_0^2 dt", kap, sq_int},
              {"sup deviation", kap, dev_sup}};
  write_svg(out / "sweep.svg", p);
  m.files["sweep_plot"] = "sweep.svg";
  CommandResult r = finish(out, s, m, nullptr);
  r.error = first_error;
  return r;
}

std::string cmd_report(const fs::path& out_dir) {
  const nlohmann::json man = read_json(out_dir / "manifest.json");
  const nlohmann::json sum = read_json(out_dir / "summary.json");
  std::ostringstream os;
  os << "directory     " << out_dir.string() << '\n';
  os << "command       " << sum.value("command", "?") << '\n';
  os << "status        " << man.value("status", "?") << '\n';
  os << "config hash   " << man.value("config_hash", "?") << '\n';
  os << "code version  " << man.value("code_version", "?") << '\n';
  int missing = 0;
  auto check = [&](const std::string& rel) {
    if (!fs::exists(out_dir / rel)) {
      os << "missing       " << rel << '\n';
      ++missing;
    }
  };
  for (const auto& [role, rel] : man.at("files").items()) check(rel.get<std::string>());
  for (const auto& rel : man.at("records")) check(rel.get<std::string>());
  for (const auto& rel : man.at("checkpoints")) check(rel.get<std::string>());
  os << "files         " << (missing ? "INCOMPLETE" : "all present") << '\n';
  if (!sum.at("error").is_null()) {
    os << "error         " << sum["error"].value("kind", "?") << ": "
       << sum["error"].value("message", "") << '\n';
  }
  if (sum.contains("t_reached")) os << "t reached     " << sum["t_reached"].dump() << '\n';
  if (sum.contains("steps")) os << "steps         " << sum["steps"].dump() << '\n';
  for (const char* key : {"checks", "final", "deviation", "straightening", "drift", "slopes",
                          "stability_fit", "correctors"}) {
    if (!sum.contains(key) || sum[key].is_null()) continue;
    os << key << '\n';
    for (const auto& [k, v] : sum[key].items()) os << "  " << k << " = " << v.dump() << '\n';
  }
  if (sum.value("command", "") == "sweep" && fs::exists(out_dir / "sweep.csv")) {
    os << "sweep table\n" << read_csv(out_dir / "sweep.csv").str();
  }
  if (missing) throw Error(std::to_string(missing) + " referenced file(s) missing\n" + os.str());
  return os.str();
}

int exit_code(const std::exception_ptr& e) {
  if (!e) return 0;
  try {
    std::rethrow_exception(e);
  } catch (const ConfigError&) {
    return 2;
  } catch (const SingularMap&) {
    return 3;
  } catch (const NoConvergence&) {
    return 4;
  } catch (const StepRejected&) {
    return 5;
  } catch (const OutOfRange&) {
    return 5;
  } catch (...) {
    return 1;
  }
}

std::string error_kind(const std::exception_ptr& e) {
  if (!e) return "none";
  try {
    std::rethrow_exception(e);
  } catch (const ConfigError&) {
    return "ConfigError";
  } catch (const SingularMap&) {
    return "SingularMap";
  } catch (const NoConvergence&) {
    return "NoConvergence";
  } catch (const StepRejected&) {
    return "StepRejected";
  } catch (const OutOfRange&) {
    return "OutOfRange";
  } catch (const std::exception&) {
    return "Error";
  } catch (...) {
    return "Unknown";
  }
}

}  // namespace visco::experiment
