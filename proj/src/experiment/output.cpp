#include "visco/experiment/output.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "visco/errors.hpp"
#include "visco/spectral/fft.hpp"
#include "visco/spectral/padded.hpp"
#include "visco/spectral/snapshot.hpp"

#ifndef VISCO_VERSION
#define VISCO_VERSION "unknown"
#endif

namespace visco::experiment {

const char* code_version() { return VISCO_VERSION; }

namespace {

void sync_path(const fs::path& p) {
  const int fd = ::open(p.c_str(), O_RDONLY);
  if (fd < 0) throw Error("cannot reopen " + p.string() + " for sync");
  const int rc = ::fsync(fd);
  ::close(fd);
  if (rc != 0) throw Error("fsync failed for " + p.string());
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_file_durably(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  sync_path(tmp);
  fs::rename(tmp, path);
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_row(const std::vector<double>& row) {
  if (row.size() != columns_.size()) throw Error("csv: row width does not match the header");
  rows_.push_back(row);
}

std::vector<double> CsvTable::column(const std::string& name) const {
  auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) throw Error("csv: no column '" + name + "'");
  const std::size_t j = std::size_t(it - columns_.begin());
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(r[j]);
  return out;
}

std::string CsvTable::str() const {
  std::ostringstream os;
  for (std::size_t j = 0; j < columns_.size(); ++j) os << (j ? "," : "") << columns_[j];
  os << '\n';
  for (const auto& r : rows_) {
    for (std::size_t j = 0; j < r.size(); ++j) os << (j ? "," : "") << format_number(r[j]);
    os << '\n';
  }
  return os.str();
}

void CsvTable::write(const fs::path& path) const { write_file_durably(path, str()); }

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error("csv: empty file " + path.string());
  std::vector<std::string> cols;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(cell);
  }
  CsvTable t(cols);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    t.add_row(row);
  }
  return t;
}

std::string render_svg(const PlotSpec& p) {
  const double W = 640, H = 420, left = 80, right = 20, top = 40, bottom = 60;
  const double pw = W - left - right, ph = H - top - bottom;
  auto tx = [&](double v) { return p.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return p.log_y ? std::log10(v) : v; };
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!p.log_x || x > 0) && (!p.log_y || y > 0);
  };

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : p.series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
  if (p.log_y) y0 = std::floor(y0), y1 = std::ceil(y1);
  if (p.log_x) x0 = std::floor(x0), x1 = std::ceil(x1);

  auto px = [&](double v) { return left + (v - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return top + ph - (v - y0) / (y1 - y0) * ph; };
  auto tick_label = [](double v, bool log) {
    char buf[32];
    if (log) {
      std::snprintf(buf, sizeof buf, "1e%d", int(std::lround(v)));
    } else {
      std::snprintf(buf, sizeof buf, "%.3g", v);
    }
    return std::string(buf);
  };
  auto ticks = [](double a, double b, bool log) {
    std::vector<double> t;
    if (log) {
      const int step = std::max(1, int(std::ceil((b - a) / 8)));
      for (double v = a; v <= b + 1e-9; v += step) t.push_back(v);
    } else {
      for (int i = 0; i <= 5; ++i) t.push_back(a + (b - a) * i / 5.0);
    }
    return t;
  };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
     << escape_xml(p.title) << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double v : ticks(x0, x1, p.log_x)) {
    os << "<line x1=\"" << px(v) << "\" y1=\"" << top + ph << "\" x2=\"" << px(v) << "\" y2=\""
       << top + ph + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << px(v) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
       << tick_label(v, p.log_x) << "</text>\n";
  }
  for (double v : ticks(y0, y1, p.log_y)) {
    os << "<line x1=\"" << left - 5 << "\" y1=\"" << py(v) << "\" x2=\"" << left << "\" y2=\""
       << py(v) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << left - 8 << "\" y=\"" << py(v) + 4 << "\" text-anchor=\"end\">"
       << tick_label(v, p.log_y) << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">"
     << escape_xml(p.x_label) << "</text>\n";
  os << "<text transform=\"translate(18," << top + ph / 2
     << ") rotate(-90)\" text-anchor=\"middle\">" << escape_xml(p.y_label) << "</text>\n";

  for (std::size_t k = 0; k < p.series.size(); ++k) {
    const auto& s = p.series[k];
    const char* color = colors[k % 8];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      os << px(tx(s.x[i])) << ',' << py(ty(s.y[i])) << ' ';
    }
    os << "\"/>\n";
    if (s.x.size() <= 16) {
      for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
        if (!usable(s.x[i], s.y[i])) continue;
        os << "<circle cx=\"" << px(tx(s.x[i])) << "\" cy=\"" << py(ty(s.y[i]))
           << "\" r=\"3\" fill=\"" << color << "\"/>\n";
      }
    }
    const double ly = top + 16 + 16 * double(k);
    os << "<line x1=\"" << left + pw - 150 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + pw - 130
       << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << left + pw - 125 << "\" y=\"" << ly << "\">" << escape_xml(s.label)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_svg(const fs::path& path, const PlotSpec& p) { write_file_durably(path, render_svg(p)); }

void write_json(const fs::path& path, const nlohmann::json& j) {
  write_file_durably(path, j.dump(2) + "\n");
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

nlohmann::json RunManifest::to_json() const {
  return {{"schema", kManifestSchema},
          {"config_hash", config_hash},
          {"code_version", code_version},
          {"status", status},
          {"files", files},
          {"records", records},
          {"checkpoints", checkpoints},
          {"timings_s", timings}};
}

fs::path write_manifest(const fs::path& out_dir, const RunManifest& m) {
  auto require = [&](const std::string& rel) {
    if (!fs::exists(out_dir / rel)) throw Error("manifest references missing file " + rel);
  };
  for (const auto& [role, rel] : m.files) require(rel);
  for (const auto& rel : m.records) require(rel);
  for (const auto& rel : m.checkpoints) require(rel);
  const fs::path path = out_dir / "manifest.json";
  write_json(path, m.to_json());
  return path;
}

CheckpointFiles write_checkpoint(const fs::path& out_dir, const std::string& stem,
                                 const Spectrum& eta, const Spectrum& u, double t, long steps,
                                 const nlohmann::json& extra) {
  const fs::path dir = out_dir / "checkpoints";
  fs::create_directories(dir);
  CheckpointFiles files{"checkpoints/" + stem + "_eta.vtrs", "checkpoints/" + stem + "_u.vtrs",
                        "checkpoints/" + stem + ".json"};
  write_snapshot(out_dir / files.eta, backward(eta), t);
  sync_path(out_dir / files.eta);
  write_snapshot(out_dir / files.u, backward(u), t);
  sync_path(out_dir / files.u);
  nlohmann::json side = {{"schema", kCheckpointSchema},
                         {"t", t},
                         {"steps", steps},
                         {"eta", fs::path(files.eta).filename().string()},
                         {"u", fs::path(files.u).filename().string()},
                         {"grid", {eta.grid().n1, eta.grid().n2, eta.grid().n3}},
                         {"dealias", to_string(eta.grid().dealias)},
                         {"extra", extra}};
  write_json(out_dir / files.sidecar, side);
  return files;
}

Checkpoint read_checkpoint(const fs::path& sidecar_path) {
  Checkpoint c;
  c.sidecar = read_json(sidecar_path);
  if (c.sidecar.value("schema", "") != kCheckpointSchema) {
    throw Error("checkpoint: unexpected schema in " + sidecar_path.string());
  }
  const fs::path dir = sidecar_path.parent_path();
  const Dealias d = parse_dealias(c.sidecar.at("dealias").get<std::string>().c_str());
  Snapshot e = read_snapshot(dir / c.sidecar.at("eta").get<std::string>(), d);
  Snapshot u = read_snapshot(dir / c.sidecar.at("u").get<std::string>(), d);
  c.eta = forward(e.field);
  c.u = forward(u.field);
  zero_nyquist(c.eta);
  zero_nyquist(c.u);
  c.t = c.sidecar.at("t").get<double>();
  c.steps = c.sidecar.at("steps").get<long>();
  return c;
}

}  // namespace visco::experiment
