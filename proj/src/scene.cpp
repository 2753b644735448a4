#include "uavlos/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "uavlos/random.hpp"

namespace uavlos {
namespace {

constexpr std::uint64_t kHeightStream = 0x5ce4e;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

} // namespace

void ItuParams::validate() const {
  require(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0,
          "alpha must lie in (0, 1), got " + std::to_string(alpha));
  require(std::isfinite(beta_per_km2) && beta_per_km2 > 0.0,
          "beta_per_km2 must be positive, got " + std::to_string(beta_per_km2));
  require(std::isfinite(gamma_m) && gamma_m > 0.0,
          "gamma_m must be positive, got " + std::to_string(gamma_m));
  require(std::isfinite(d_correction) && d_correction >= 0.0 &&
              d_correction < 1.0,
          "d_correction must lie in [0, 1), got " +
              std::to_string(d_correction));
  require(std::isfinite(patch_side_m) && patch_side_m > 0.0,
          "area_side_m must be positive, got " + std::to_string(patch_side_m));
}

double ItuParams::patch_area_km2() const noexcept {
  const double side_km = patch_side_m / 1000.0;
  return side_km * side_km;
}

double ItuParams::footprint_side_m() const noexcept {
  return 1000.0 * std::sqrt(alpha / beta_per_km2);
}

double ItuParams::nominal_pitch_m() const noexcept {
  return 1000.0 / std::sqrt(beta_per_km2);
}

double ItuParams::expected_building_count() const noexcept {
  return beta_per_km2 * patch_area_km2();
}

UrbanScene::UrbanScene(ItuParams params, std::uint64_t seed,
                       std::vector<Building> buildings)
    : params_(params), seed_(seed), buildings_(std::move(buildings)) {
  require(std::isfinite(params_.patch_side_m) && params_.patch_side_m > 0.0,
          "patch side must be positive");
  const double side = params_.patch_side_m;
  for (std::size_t i = 0; i < buildings_.size(); ++i) {
    const Building& b = buildings_[i];
    const std::string tag = "building " + std::to_string(i) + ": ";
    require(std::isfinite(b.half_side) && b.half_side > 0.0,
            tag + "half_side must be positive");
    require(std::isfinite(b.height) && b.height >= 0.0,
            tag + "height must be nonnegative");
    require(b.x_lo() >= 0.0 && b.y_lo() >= 0.0 && b.x_hi() <= side &&
                b.y_hi() <= side,
            tag + "footprint outside the patch");
  }

  // Sweep in x_lo order; only overlapping interiors are rejected.
  std::vector<std::size_t> order(buildings_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return buildings_[a].x_lo() < buildings_[b].x_lo();
  });
  for (std::size_t a = 0; a < order.size(); ++a) {
    const Building& p = buildings_[order[a]];
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      const Building& q = buildings_[order[b]];
      if (q.x_lo() >= p.x_hi()) break;
      if (q.y_lo() < p.y_hi() && p.y_lo() < q.y_hi()) {
        throw std::invalid_argument(
            "footprints overlap: buildings " + std::to_string(order[a]) +
            " and " + std::to_string(order[b]));
      }
    }
  }

  columns_.reserve(buildings_.size());
  for (const Building& b : buildings_) {
    columns_.push_back(b.x_lo(), b.x_hi(), b.y_lo(), b.y_hi(), b.height);
    max_height_ = std::max(max_height_, b.height);
  }
}

double UrbanScene::coverage_ratio() const noexcept {
  double area = 0.0;
  for (const Building& b : buildings_) area += 4.0 * b.half_side * b.half_side;
  return area / (patch_side() * patch_side());
}

double rayleigh_height(double gamma, double u) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  return gamma * std::sqrt(-2.0 * std::log1p(-u));
}

double rayleigh_cdf(double gamma, double h) noexcept {
  if (h <= 0.0) return 0.0;
  return -std::expm1(-h * h / (2.0 * gamma * gamma));
}

int grid_cells_per_side(const ItuParams& params) {
  const auto n_buildings =
      static_cast<long long>(std::llround(params.expected_building_count()));
  auto n = static_cast<long long>(std::sqrt(static_cast<double>(n_buildings)));
  while (n * n < n_buildings) ++n;
  while (n > 1 && (n - 1) * (n - 1) >= n_buildings) --n;
  return static_cast<int>(n);
}

UrbanScene generate_scene(const ItuParams& params, std::uint64_t seed) {
  params.validate();
  if (params.expected_building_count() < 1.0) {
    throw std::invalid_argument(
        "patch too small: beta * area holds fewer than one building");
  }
  const long long n_buildings = std::llround(params.expected_building_count());
  const int n = grid_cells_per_side(params);
  const double pitch = params.patch_side_m / n;
  const double side = params.footprint_side_m();
  if (!(side < pitch)) {
    throw std::invalid_argument(
        "patch too small: footprint does not fit inside a grid cell");
  }

  const long long cells = static_cast<long long>(n) * n;
  const long long vacancies = cells - n_buildings;
  std::vector<bool> vacant(static_cast<std::size_t>(cells), false);
  for (long long i = 0; i < vacancies; ++i) {
    const auto idx = static_cast<long long>(
        std::floor((static_cast<double>(i) + 0.5) * static_cast<double>(cells) /
                   static_cast<double>(vacancies)));
    vacant[static_cast<std::size_t>(idx)] = true;
  }

  Rng rng(substream_seed(seed, kHeightStream));
  std::vector<Building> buildings;
  buildings.reserve(static_cast<std::size_t>(n_buildings));
  for (long long c = 0; c < cells; ++c) {
    if (vacant[static_cast<std::size_t>(c)]) continue;
    const double col = static_cast<double>(c % n);
    const double row = static_cast<double>(c / n);
    Building b;
    b.center_x = (col + 0.5) * pitch;
    b.center_y = (row + 0.5) * pitch;
    b.half_side = 0.5 * side;
    b.height = rayleigh_height(params.gamma_m, rng.uniform());
    buildings.push_back(b);
  }
  return UrbanScene(params, seed, std::move(buildings));
}

} // namespace uavlos
