#include "uavlos/los_engine.hpp"

#include <cassert>
#include <cmath>

#include "uavlos/simd/slab.hpp"

namespace uavlos {

double Link::horizontal_length() const noexcept {
  return std::hypot(rx_x - tx_x, rx_y - tx_y);
}

std::optional<Crossing> footprint_crossing(const Link& link,
                                           const Building& b) noexcept {
  const simd::SegmentQuery q = link.query();
  const simd::Clip c = simd::clip_segment(b.x_lo(), b.x_hi(), b.y_lo(),
                                          b.y_hi(), q.x0, q.y0, q.dx, q.dy);
  if (!c.hit) return std::nullopt;
  return Crossing{c.t_in, c.t_out};
}

bool is_blocked_by(const Link& link, const Building& b) noexcept {
  const simd::SegmentQuery q = link.query();
  const simd::Clip c = simd::clip_segment(b.x_lo(), b.x_hi(), b.y_lo(),
                                          b.y_hi(), q.x0, q.y0, q.dx, q.dy);
  return c.hit && b.height >= simd::lowest_height(q.h0, q.dh, c);
}

bool is_los(const UrbanScene& scene, const Link& link) noexcept {
  return !simd::active_kernels().any_blocking(scene.boxes(), link.query());
}

std::size_t count_crossed_buildings(const UrbanScene& scene,
                                    const Link& link) noexcept {
  return simd::active_kernels().count_crossings(scene.boxes(), link.query());
}

bool is_inside_building(const UrbanScene& scene, double x, double y,
                        double h) noexcept {
  return !is_los(scene, Link{x, y, h, x, y, h});
}

OccluderSet::OccluderSet(const UrbanScene& scene, double min_link_height)
    : min_height_(min_link_height) {
  for (const Building& b : scene.buildings()) {
    if (b.height >= min_link_height) {
      columns_.push_back(b.x_lo(), b.x_hi(), b.y_lo(), b.y_hi(), b.height);
    }
  }
}

bool OccluderSet::is_los(const Link& link) const noexcept {
  assert(std::min(link.tx_h, link.rx_h) >= min_height_);
  return !simd::active_kernels().any_blocking(columns_.view(), link.query());
}

bool OccluderSet::is_inside(double x, double y, double h) const noexcept {
  return !is_los(Link{x, y, h, x, y, h});
}

} // namespace uavlos
