#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "uavlos/experiments.hpp"

namespace uavlos {

struct RunConfig {
  SweepConfig sweep;
  std::string out_dir = "out";
  PdfChoice pdf = PdfChoice::gauss;

  MomentMode moments() const noexcept { return sweep.moments; }
};

class ConfigError : public std::runtime_error {
public:
  /// `line` is 1-based; 0 when the problem is not tied to one line.
  ConfigError(int line, const std::string& message);
  int line() const noexcept { return line_; }

private:
  int line_;
};

/// Parses a `key = value` document ('#' starts a comment). Unknown or
/// repeated keys are rejected; missing keys keep their defaults (alpha 0.37,
/// beta 188 /km^2, gamma 13.3 m, A 775 m, D 0.05, delta_d 2 m, 10^5 samples,
/// 10 scenes, seed 1, the six-by-six height grid, paper moments, Gaussian
/// density, output directory "out"). Throws ConfigError.
RunConfig parse_config(std::string_view text);

std::string_view to_string(MomentMode m) noexcept;
std::string_view to_string(PdfChoice p) noexcept;

} // namespace uavlos
