#include "uavlos/csv_io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace uavlos {
namespace {

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::runtime_error("bad number in CSV: '" + s + "'");
  }
  if (used != s.size()) throw std::runtime_error("bad number in CSV: '" + s + "'");
  return v;
}

/// Parses "# k=v k=v ..." into a map.
std::map<std::string, std::string> parse_comment(const std::string& line) {
  std::map<std::string, std::string> out;
  std::istringstream words(line.substr(1));
  std::string word;
  while (words >> word) {
    const auto eq = word.find('=');
    if (eq != std::string::npos) out[word.substr(0, eq)] = word.substr(eq + 1);
  }
  return out;
}

const std::string& field(const std::map<std::string, std::string>& m,
                         const std::string& key) {
  const auto it = m.find(key);
  if (it == m.end()) throw std::runtime_error("CSV metadata lacks " + key);
  return it->second;
}

bool read_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return true;
  }
  return false;
}

void expect_header(std::istream& in, const char* header) {
  std::string line;
  if (!read_data_line(in, line) || line != header) {
    throw std::runtime_error(std::string("expected CSV header ") + header);
  }
}

} // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream s(line);
  while (std::getline(s, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

void write_scene_csv(std::ostream& out, const UrbanScene& scene) {
  const ItuParams& p = scene.params();
  out << "# patch_side_m=" << format_number(p.patch_side_m)
      << " alpha=" << format_number(p.alpha)
      << " beta_per_km2=" << format_number(p.beta_per_km2)
      << " gamma_m=" << format_number(p.gamma_m) << " seed=" << scene.seed()
      << '\n'
      << kSceneHeader << '\n';
  for (const Building& b : scene.buildings()) {
    out << format_number(b.center_x) << ',' << format_number(b.center_y) << ','
        << format_number(b.half_side) << ',' << format_number(b.height) << '\n';
  }
}

UrbanScene read_scene_csv(std::istream& in) {
  std::string line;
  if (!read_data_line(in, line) || line.front() != '#') {
    throw std::runtime_error("scene CSV must start with a '#' metadata line");
  }
  const auto meta = parse_comment(line);
  ItuParams params;
  params.patch_side_m = to_double(field(meta, "patch_side_m"));
  params.alpha = to_double(field(meta, "alpha"));
  params.beta_per_km2 = to_double(field(meta, "beta_per_km2"));
  params.gamma_m = to_double(field(meta, "gamma_m"));
  const auto seed = std::stoull(field(meta, "seed"));
  expect_header(in, kSceneHeader);

  std::vector<Building> buildings;
  while (read_data_line(in, line)) {
    const auto cells = split_csv_line(line);
    if (cells.size() != 4) throw std::runtime_error("scene row needs 4 fields");
    buildings.push_back({to_double(cells[0]), to_double(cells[1]),
                         to_double(cells[2]), to_double(cells[3])});
  }
  return UrbanScene(params, seed, std::move(buildings));
}

void write_trace_csv(std::ostream& out, const PathTrace& trace) {
  out << "# tx_x_m=" << format_number(trace.tx.x)
      << " tx_y_m=" << format_number(trace.tx.y)
      << " tx_h_m=" << format_number(trace.tx.h)
      << " rx_h_m=" << format_number(trace.rx_h)
      << " delta_d_m=" << format_number(trace.delta_d)
      << " ordering=serpentine\n"
      << kTraceHeader << '\n';
  for (const TracePoint& p : trace.points) {
    out << p.step << ',' << format_number(p.x) << ',' << format_number(p.y)
        << ',' << static_cast<int>(p.state) << '\n';
  }
}

PathTrace read_trace_csv(std::istream& in) {
  std::string line;
  if (!read_data_line(in, line) || line.front() != '#') {
    throw std::runtime_error("trace CSV must start with a '#' metadata line");
  }
  const auto meta = parse_comment(line);
  PathTrace trace;
  trace.tx = {to_double(field(meta, "tx_x_m")), to_double(field(meta, "tx_y_m")),
              to_double(field(meta, "tx_h_m"))};
  trace.rx_h = to_double(field(meta, "rx_h_m"));
  trace.delta_d = to_double(field(meta, "delta_d_m"));
  expect_header(in, kTraceHeader);
  while (read_data_line(in, line)) {
    const auto cells = split_csv_line(line);
    if (cells.size() != 4) throw std::runtime_error("trace row needs 4 fields");
    TracePoint p;
    p.step = std::stoull(cells[0]);
    p.x = to_double(cells[1]);
    p.y = to_double(cells[2]);
    if (cells[3] == "0") {
      p.state = LinkState::nlos;
    } else if (cells[3] == "1") {
      p.state = LinkState::los;
    } else {
      throw std::runtime_error("trace state must be 0 or 1");
    }
    if (!trace.points.empty() && p.step <= trace.points.back().step) {
      throw std::runtime_error("trace steps must increase");
    }
    trace.points.push_back(p);
  }
  return trace;
}

void write_markov_csv(std::ostream& out, std::span<const MarkovSummary> rows) {
  out << kMarkovHeader << '\n';
  for (const MarkovSummary& m : rows) {
    out << format_number(m.tx_h) << ',' << format_number(m.rx_h) << ','
        << format_number(m.p01) << ',' << format_number(m.p10) << ','
        << format_number(m.mu) << ',' << format_number(m.lambda) << ','
        << format_number(m.mean_dlos) << ',' << format_number(m.mean_dnlos)
        << ',' << format_number(m.ks_los) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << kSweepHeader << '\n';
  for (const SweepRow& r : rows) {
    out << format_number(r.tx_h) << ',' << format_number(r.rx_h) << ','
        << format_number(r.plos_mc) << ',' << format_number(r.plos_ci95) << ','
        << format_number(r.plos_closed) << ','
        << format_number(r.plos_numeric_poly) << ','
        << format_number(r.plos_numeric_gauss) << ',' << format_number(r.mu)
        << ',' << format_number(r.lambda) << ',' << format_number(r.mean_dlos)
        << ',' << format_number(r.mean_dnlos) << ',' << format_number(r.ks_los)
        << '\n';
  }
}

} // namespace uavlos
