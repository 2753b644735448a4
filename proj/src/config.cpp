#include "uavlos/config.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace uavlos {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string where(int line, std::string_view key) {
  return "line " + std::to_string(line) + ": " + std::string(key);
}

double parse_double(int line, std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError(line, where(line, key) + ": not a number: '" +
                                std::string(v) + "'");
  }
  return out;
}

std::uint64_t parse_count(int line, std::string_view key, std::string_view v) {
  const double d = parse_double(line, key, v);
  if (d < 0.0 || d != std::floor(d) || d > 1.8e19) {
    throw ConfigError(line, where(line, key) +
                                ": expected a nonnegative integer, got '" +
                                std::string(v) + "'");
  }
  return static_cast<std::uint64_t>(d);
}

std::vector<double> parse_list(int line, std::string_view key,
                               std::string_view v) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= v.size()) {
    const auto comma = v.find(',', start);
    const auto item = trim(v.substr(start, comma == std::string_view::npos
                                               ? std::string_view::npos
                                               : comma - start));
    out.push_back(parse_double(line, key, item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

} // namespace

ConfigError::ConfigError(int line, const std::string& message)
    : std::runtime_error(message), line_(line) {}

std::string_view to_string(MomentMode m) noexcept {
  return m == MomentMode::paper ? "paper" : "derived";
}

std::string_view to_string(PdfChoice p) noexcept {
  return p == PdfChoice::poly ? "poly" : "gauss";
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(line_no, "line " + std::to_string(line_no) +
                                     ": expected 'key = value'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!seen.insert(std::string(key)).second) {
      throw ConfigError(line_no, where(line_no, key) + ": duplicate key");
    }
    if (value.empty()) {
      throw ConfigError(line_no, where(line_no, key) + ": missing value");
    }

    ItuParams& p = cfg.sweep.params;
    if (key == "alpha") {
      p.alpha = parse_double(line_no, key, value);
    } else if (key == "beta_per_km2") {
      p.beta_per_km2 = parse_double(line_no, key, value);
    } else if (key == "gamma_m") {
      p.gamma_m = parse_double(line_no, key, value);
    } else if (key == "area_side_m") {
      p.patch_side_m = parse_double(line_no, key, value);
    } else if (key == "d_correction") {
      p.d_correction = parse_double(line_no, key, value);
    } else if (key == "delta_d_m") {
      cfg.sweep.delta_d = parse_double(line_no, key, value);
    } else if (key == "n_samples") {
      cfg.sweep.n_samples = parse_count(line_no, key, value);
    } else if (key == "n_scenes") {
      cfg.sweep.n_scenes = parse_count(line_no, key, value);
    } else if (key == "seed") {
      cfg.sweep.seed = parse_count(line_no, key, value);
    } else if (key == "tx_heights_m") {
      cfg.sweep.tx_heights = parse_list(line_no, key, value);
    } else if (key == "rx_heights_m") {
      cfg.sweep.rx_heights = parse_list(line_no, key, value);
    } else if (key == "moment_mode") {
      if (value == "paper") {
        cfg.sweep.moments = MomentMode::paper;
      } else if (value == "derived") {
        cfg.sweep.moments = MomentMode::derived;
      } else {
        throw ConfigError(line_no, where(line_no, key) +
                                       ": expected 'paper' or 'derived'");
      }
    } else if (key == "pdf_choice") {
      if (value == "poly") {
        cfg.pdf = PdfChoice::poly;
      } else if (value == "gauss") {
        cfg.pdf = PdfChoice::gauss;
      } else {
        throw ConfigError(line_no,
                          where(line_no, key) + ": expected 'poly' or 'gauss'");
      }
    } else if (key == "out_dir") {
      cfg.out_dir = std::string(value);
    } else {
      throw ConfigError(line_no, where(line_no, key) + ": unknown key");
    }
  }

  // Invariant messages start with the offending key name.
  try {
    cfg.sweep.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, std::string("invalid config: ") + e.what());
  }
  return cfg;
}

} // namespace uavlos
