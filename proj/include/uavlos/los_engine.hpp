#pragma once

#include <cstddef>
#include <optional>

#include "uavlos/scene.hpp"
#include "uavlos/simd/kernels.hpp"

namespace uavlos {

/// Straight 3D segment between two UAVs. Heights are above ground.
struct Link {
  double tx_x = 0.0, tx_y = 0.0, tx_h = 0.0;
  double rx_x = 0.0, rx_y = 0.0, rx_h = 0.0;

  Link reversed() const noexcept {
    return {rx_x, rx_y, rx_h, tx_x, tx_y, tx_h};
  }
  double horizontal_length() const noexcept;
  simd::SegmentQuery query() const noexcept {
    return {tx_x, tx_y, tx_h, rx_x - tx_x, rx_y - tx_y, rx_h - tx_h};
  }
};

/// Parameter range of the link's ground projection inside a footprint.
struct Crossing {
  double t_in = 0.0;
  double t_out = 0.0;
};

std::optional<Crossing> footprint_crossing(const Link& link,
                                           const Building& building) noexcept;

/// Blocked iff the projection touches the footprint and the roof is at or
/// above the lowest link height over the crossing. Grazing counts as blocked,
/// and so does an endpoint inside the prism.
bool is_blocked_by(const Link& link, const Building& building) noexcept;

bool is_los(const UrbanScene& scene, const Link& link) noexcept;

std::size_t count_crossed_buildings(const UrbanScene& scene,
                                    const Link& link) noexcept;

/// Point inside a building prism (roof inclusive).
bool is_inside_building(const UrbanScene& scene, double x, double y,
                        double h) noexcept;

/// Subset of a scene's prisms that can block links whose endpoints are both
/// at or above `min_link_height`: roofs below that height never block.
class OccluderSet {
public:
  OccluderSet(const UrbanScene& scene, double min_link_height);

  /// Caller guarantees min(tx_h, rx_h) >= min_link_height.
  bool is_los(const Link& link) const noexcept;
  bool is_inside(double x, double y, double h) const noexcept;
  std::size_t size() const noexcept { return columns_.size(); }

private:
  simd::BoxColumns columns_;
  double min_height_;
};

} // namespace uavlos
