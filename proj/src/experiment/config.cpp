#include "visco/experiment/config.hpp"

#include <cstdio>
#include <set>
#include <sstream>

#include "toml.hpp"
#include "visco/errors.hpp"

namespace visco::experiment {

namespace {

using Keys = std::set<std::string>;

void reject_unknown(const toml::table& t, const Keys& allowed, const std::string& where) {
  for (const auto& [k, v] : t) {
    if (!allowed.count(std::string(k.str()))) {
      throw ConfigError("unknown key '" + std::string(k.str()) + "' in " + where);
    }
  }
}

const toml::table* subtable(const toml::table& t, const char* key) {
  const toml::node* n = t.get(key);
  if (!n) return nullptr;
  if (!n->is_table()) throw ConfigError(std::string("'") + key + "' must be a table");
  return n->as_table();
}

double get_double(const toml::table& t, const char* key, double fallback) {
  const toml::node* n = t.get(key);
  if (!n) return fallback;
  if (auto v = n->value<double>()) return *v;
  throw ConfigError(std::string("'") + key + "' must be a number");
}

long get_int(const toml::table& t, const char* key, long fallback) {
  const toml::node* n = t.get(key);
  if (!n) return fallback;
  if (n->is_integer()) return long(*n->value<std::int64_t>());
  throw ConfigError(std::string("'") + key + "' must be an integer");
}

bool get_bool(const toml::table& t, const char* key, bool fallback) {
  const toml::node* n = t.get(key);
  if (!n) return fallback;
  if (auto v = n->value<bool>()) return *v;
  throw ConfigError(std::string("'") + key + "' must be a boolean");
}

std::string get_string(const toml::table& t, const char* key, const std::string& fallback) {
  const toml::node* n = t.get(key);
  if (!n) return fallback;
  if (auto v = n->value<std::string>()) return *v;
  throw ConfigError(std::string("'") + key + "' must be a string");
}

template <class T, std::size_t N>
std::array<T, N> get_array(const toml::table& t, const char* key, std::array<T, N> fallback) {
  const toml::node* n = t.get(key);
  if (!n) return fallback;
  const toml::array* a = n->as_array();
  if (!a || a->size() != N) {
    throw ConfigError(std::string("'") + key + "' must be an array of " + std::to_string(N));
  }
  std::array<T, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    auto v = (*a)[i].value<T>();
    if (!v) throw ConfigError(std::string("'") + key + "' has a non-numeric entry");
    out[i] = *v;
  }
  return out;
}

EtaKind parse_eta_kind(const std::string& s) {
  if (s == "zero") return EtaKind::Zero;
  if (s == "shear") return EtaKind::Shear;
  if (s == "composed") return EtaKind::ComposedShears;
  throw ConfigError("unknown eta kind '" + s + "' (zero | shear | composed)");
}

const char* to_string(EtaKind k) {
  switch (k) {
    case EtaKind::Zero: return "zero";
    case EtaKind::Shear: return "shear";
    case EtaKind::ComposedShears: return "composed";
  }
  return "?";
}

VelocityKind parse_velocity_kind(const std::string& s) {
  if (s == "zero") return VelocityKind::Zero;
  if (s == "mode") return VelocityKind::Mode;
  if (s == "abc") return VelocityKind::Abc;
  if (s == "random") return VelocityKind::Random;
  throw ConfigError("unknown velocity kind '" + s + "' (zero | mode | abc | random)");
}

const char* to_string(VelocityKind k) {
  switch (k) {
    case VelocityKind::Zero: return "zero";
    case VelocityKind::Mode: return "mode";
    case VelocityKind::Abc: return "abc";
    case VelocityKind::Random: return "random";
  }
  return "?";
}

Model parse_model(const std::string& s) {
  if (s == "incompressible") return Model::Incompressible;
  if (s == "compressible") return Model::Compressible;
  throw ConfigError("unknown model '" + s + "'");
}

void read_grid(const toml::table& t, ExperimentConfig& c) {
  reject_unknown(t, {"n", "n1", "n2", "n3", "dealias"}, "[grid]");
  const long n = get_int(t, "n", c.grid.n1);
  const long n1 = get_int(t, "n1", n), n2 = get_int(t, "n2", n), n3 = get_int(t, "n3", n);
  Dealias d = c.grid.dealias;
  if (t.get("dealias")) {
    try {
      d = parse_dealias(get_string(t, "dealias", "").c_str());
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }
  try {
    c.grid = Grid(int(n1), int(n2), int(n3), d);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

void read_scheme(const toml::table& t, SchemeConfig& s) {
  reject_unknown(t, {"dt", "fixed_dt", "cfl", "order", "proj_tol", "max_picard", "vol_tol", "j_floor"},
                 "[scheme]");
  s.dt_max = get_double(t, "dt", s.dt_max);
  s.fixed_dt = get_bool(t, "fixed_dt", s.fixed_dt);
  s.cfl = get_double(t, "cfl", s.cfl);
  s.order = int(get_int(t, "order", s.order));
  s.proj_tol = get_double(t, "proj_tol", s.proj_tol);
  s.max_picard = int(get_int(t, "max_picard", s.max_picard));
  s.vol_tol = get_double(t, "vol_tol", s.vol_tol);
  s.j_floor = get_double(t, "j_floor", s.j_floor);
}

Shear read_shear(const toml::table& t) {
  reject_unknown(t, {"component", "axis", "amplitude", "wavenumber", "phase"}, "shear entry");
  Shear s;
  s.component = int(get_int(t, "component", s.component));
  s.axis = int(get_int(t, "axis", s.axis));
  s.amplitude = get_double(t, "amplitude", s.amplitude);
  s.wavenumber = int(get_int(t, "wavenumber", s.wavenumber));
  s.phase = get_double(t, "phase", s.phase);
  return s;
}

void read_initial(const toml::table& t, InitialRecipe& r) {
  reject_unknown(t, {"seed", "eta", "u"}, "[initial]");
  r.seed = std::uint64_t(get_int(t, "seed", long(r.seed)));
  if (const toml::table* e = subtable(t, "eta")) {
    reject_unknown(*e, {"kind", "shears"}, "[initial.eta]");
    r.eta_kind = parse_eta_kind(get_string(*e, "kind", to_string(r.eta_kind)));
    if (const toml::node* sh = e->get("shears")) {
      const toml::array* a = sh->as_array();
      if (!a) throw ConfigError("'shears' must be an array of tables");
      r.shears.clear();
      for (const auto& item : *a) {
        if (!item.is_table()) throw ConfigError("'shears' must be an array of tables");
        r.shears.push_back(read_shear(*item.as_table()));
      }
    }
  }
  if (const toml::table* u = subtable(t, "u")) {
    reject_unknown(*u, {"kind", "amplitude", "k", "direction", "phase", "kmax", "mean"},
                   "[initial.u]");
    VelocityRecipe& v = r.u;
    v.kind = parse_velocity_kind(get_string(*u, "kind", to_string(v.kind)));
    v.amplitude = get_double(*u, "amplitude", v.amplitude);
    v.k = get_array<int, 3>(*u, "k", v.k);
    v.direction = get_array<double, 3>(*u, "direction", v.direction);
    v.phase = get_double(*u, "phase", v.phase);
    v.kmax = int(get_int(*u, "kmax", v.kmax));
    v.mean = get_array<double, 3>(*u, "mean", v.mean);
  }
}

}  // namespace

const char* to_string(Kind k) {
  switch (k) {
    case Kind::Run: return "run";
    case Kind::Sweep: return "sweep";
    case Kind::CompareLinear: return "compare-linear";
    case Kind::Straighten: return "straighten";
    case Kind::Drift: return "drift";
    case Kind::Oracle: return "oracle";
  }
  return "?";
}

const char* to_string(Model m) {
  return m == Model::Incompressible ? "incompressible" : "compressible";
}

Kind parse_kind(const std::string& s) {
  for (Kind k : {Kind::Run, Kind::Sweep, Kind::CompareLinear, Kind::Straighten, Kind::Drift,
                 Kind::Oracle}) {
    if (s == to_string(k)) return k;
  }
  throw ConfigError("unknown experiment '" + s + "'");
}

CompressibleParams ExperimentConfig::compressible_params() const {
  CompressibleParams p;
  p.rho_bar = rho;
  p.mu = mu;
  p.lambda = lambda;
  p.kappa = kappa;
  try {
    p.pressure = PressureLaw(pressure_a, pressure_gamma, rho);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return p;
}

void ExperimentConfig::validate() const {
  if (!(t_final > 0.0)) throw ConfigError("t_final must be positive");
  if (!(sample_interval > 0.0) || sample_interval > t_final) {
    throw ConfigError("sample_interval must lie in (0, t_final]");
  }
  if (checkpoint_interval < 0.0) throw ConfigError("checkpoint_interval must be >= 0");
  if (experiment == Kind::Sweep && sweep_kappa.empty()) {
    throw ConfigError("sweep needs a nonempty [sweep] kappa list");
  }
  for (double k : sweep_kappa) {
    if (!(k > 0.0)) throw ConfigError("sweep kappa values must be positive");
  }
  if (oracle_trials < 1) throw ConfigError("oracle trials must be >= 1");
  if (initial.u.kmax < 1) throw ConfigError("initial.u.kmax must be >= 1");
  try {
    scheme.validate();
    if (model == Model::Incompressible) {
      flow_params().validate();
    } else {
      compressible_params().validate();
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig parse_config(const std::string& text) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    throw ConfigError(std::string("TOML: ") + std::string(e.description()));
  }
  reject_unknown(root,
                 {"name", "experiment", "model", "t_final", "sample_interval", "checkpoint_interval",
                  "out_dir", "parallel", "grid", "params", "scheme", "initial", "sweep", "oracle"},
                 "top level");
  ExperimentConfig c;
  c.name = get_string(root, "name", c.name);
  c.experiment = parse_kind(get_string(root, "experiment", to_string(c.experiment)));
  c.model = parse_model(get_string(root, "model", to_string(c.model)));
  c.t_final = get_double(root, "t_final", c.t_final);
  c.sample_interval = get_double(root, "sample_interval", c.sample_interval);
  c.checkpoint_interval = get_double(root, "checkpoint_interval", c.checkpoint_interval);
  c.out_dir = get_string(root, "out_dir", c.out_dir.string());
  c.parallel = get_bool(root, "parallel", c.parallel);

  if (const toml::table* t = subtable(root, "grid")) read_grid(*t, c);
  if (const toml::table* t = subtable(root, "params")) {
    reject_unknown(*t, {"rho", "mu", "lambda", "kappa", "pressure_a", "pressure_gamma"},
                   "[params]");
    c.rho = get_double(*t, "rho", c.rho);
    c.mu = get_double(*t, "mu", c.mu);
    c.lambda = get_double(*t, "lambda", c.lambda);
    c.kappa = get_double(*t, "kappa", c.kappa);
    c.pressure_a = get_double(*t, "pressure_a", c.pressure_a);
    c.pressure_gamma = get_double(*t, "pressure_gamma", c.pressure_gamma);
  }
  if (const toml::table* t = subtable(root, "scheme")) read_scheme(*t, c.scheme);
  if (const toml::table* t = subtable(root, "initial")) read_initial(*t, c.initial);
  if (const toml::table* t = subtable(root, "sweep")) {
    reject_unknown(*t, {"kappa"}, "[sweep]");
    if (const toml::node* n = t->get("kappa")) {
      const toml::array* a = n->as_array();
      if (!a) throw ConfigError("sweep.kappa must be an array");
      for (const auto& item : *a) {
        auto v = item.value<double>();
        if (!v) throw ConfigError("sweep.kappa entries must be numbers");
        c.sweep_kappa.push_back(*v);
      }
    }
  }
  if (const toml::table* t = subtable(root, "oracle")) {
    reject_unknown(*t, {"trials", "inject_fault"}, "[oracle]");
    c.oracle_trials = int(get_int(*t, "trials", c.oracle_trials));
    c.oracle_inject_fault = get_bool(*t, "inject_fault", c.oracle_inject_fault);
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  toml::table root;
  try {
    root = toml::parse_file(path.string());
  } catch (const toml::parse_error& e) {
    throw ConfigError(path.string() + ": " + std::string(e.description()));
  }
  std::ostringstream os;
  os << root;
  return parse_config(os.str());
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json shears = nlohmann::json::array();
  for (const Shear& s : c.initial.shears) {
    shears.push_back({{"component", s.component},
                      {"axis", s.axis},
                      {"amplitude", s.amplitude},
                      {"wavenumber", s.wavenumber},
                      {"phase", s.phase}});
  }
  const VelocityRecipe& u = c.initial.u;
  return {
      {"name", c.name},
      {"experiment", to_string(c.experiment)},
      {"model", to_string(c.model)},
      {"grid", {{"n1", c.grid.n1}, {"n2", c.grid.n2}, {"n3", c.grid.n3},
                {"dealias", to_string(c.grid.dealias)}}},
      {"params", {{"rho", c.rho}, {"mu", c.mu}, {"lambda", c.lambda}, {"kappa", c.kappa},
                  {"pressure_a", c.pressure_a}, {"pressure_gamma", c.pressure_gamma}}},
      {"scheme", {{"dt", c.scheme.dt_max}, {"fixed_dt", c.scheme.fixed_dt},
                  {"cfl", c.scheme.cfl}, {"order", c.scheme.order},
                  {"proj_tol", c.scheme.proj_tol}, {"max_picard", c.scheme.max_picard},
                  {"vol_tol", c.scheme.vol_tol}, {"j_floor", c.scheme.j_floor}}},
      {"initial", {{"seed", c.initial.seed},
                   {"eta", {{"kind", to_string(c.initial.eta_kind)}, {"shears", shears}}},
                   {"u", {{"kind", to_string(u.kind)}, {"amplitude", u.amplitude},
                          {"k", u.k}, {"direction", u.direction}, {"phase", u.phase},
                          {"kmax", u.kmax}, {"mean", u.mean}}}}},
      {"t_final", c.t_final},
      {"sample_interval", c.sample_interval},
      {"checkpoint_interval", c.checkpoint_interval},
      {"sweep", {{"kappa", c.sweep_kappa}}},
      {"oracle", {{"trials", c.oracle_trials}, {"inject_fault", c.oracle_inject_fault}}},
  };
}

std::string config_hash(const ExperimentConfig& c) {
  const std::string text = to_json(c).dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace visco::experiment
