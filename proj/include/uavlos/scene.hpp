#pragma once

#include <cstdint>
#include <vector>

#include "uavlos/simd/kernels.hpp"

namespace uavlos {

/// Built-up area descriptor: coverage ratio alpha, density beta (per km^2),
/// Rayleigh height scale gamma, same-street correction D and patch side A.
struct ItuParams {
  double alpha = 0.37;
  double beta_per_km2 = 188.0;
  double gamma_m = 13.3;
  double d_correction = 0.05;
  double patch_side_m = 775.0;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  double patch_area_km2() const noexcept;
  /// Footprint side sqrt(alpha / beta), in meters.
  double footprint_side_m() const noexcept;
  /// Grid pitch 1 / sqrt(beta), in meters.
  double nominal_pitch_m() const noexcept;
  /// beta * S, the expected number of buildings on the patch.
  double expected_building_count() const noexcept;

  bool operator==(const ItuParams&) const = default;
};

struct Building {
  double center_x = 0.0;
  double center_y = 0.0;
  double half_side = 0.0;
  double height = 0.0;

  double x_lo() const noexcept { return center_x - half_side; }
  double x_hi() const noexcept { return center_x + half_side; }
  double y_lo() const noexcept { return center_y - half_side; }
  double y_hi() const noexcept { return center_y + half_side; }

  bool operator==(const Building&) const = default;
};

/// Immutable set of square-footprint buildings on an A x A patch whose lower
/// left corner is the origin.
class UrbanScene {
public:
  /// Validates footprints (positive size, inside the patch, pairwise
  /// disjoint interiors) and heights. Throws std::invalid_argument.
  UrbanScene(ItuParams params, std::uint64_t seed,
             std::vector<Building> buildings);

  const ItuParams& params() const noexcept { return params_; }
  double patch_side() const noexcept { return params_.patch_side_m; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::vector<Building>& buildings() const noexcept { return buildings_; }
  std::size_t size() const noexcept { return buildings_.size(); }

  simd::BoxView boxes() const noexcept { return columns_.view(); }

  double max_height() const noexcept { return max_height_; }
  /// Total footprint area over patch area.
  double coverage_ratio() const noexcept;

private:
  ItuParams params_;
  std::uint64_t seed_;
  std::vector<Building> buildings_;
  simd::BoxColumns columns_;
  double max_height_ = 0.0;
};

/// Inverse Rayleigh CDF: gamma * sqrt(-2 ln(1 - u)), u in [0, 1).
double rayleigh_height(double gamma, double u);

double rayleigh_cdf(double gamma, double h) noexcept;

/// Lays out round(beta * S) buildings on an aligned square grid of
/// n = ceil(sqrt(N)) cells per side (pitch A / n, close to 1 / sqrt(beta)),
/// one footprint of side sqrt(alpha / beta) centred per occupied cell. The
/// n^2 - N surplus cells are left empty at evenly spread positions, so the
/// building count and the coverage ratio both match the parameters. Positions
/// are deterministic; heights are i.i.d. Rayleigh(gamma) drawn from `seed`.
///
/// Throws std::invalid_argument on invalid parameters, when beta * S < 1, or
/// when a footprint does not fit inside its grid cell.
UrbanScene generate_scene(const ItuParams& params, std::uint64_t seed);

/// Grid cells per side used by generate_scene().
int grid_cells_per_side(const ItuParams& params);

} // namespace uavlos
