#pragma once

// Scalar slab clipping shared by the reference kernel and los_engine.

#include <algorithm>

namespace uavlos::simd {

struct Clip {
  double t_in = 0.0;
  double t_out = 1.0;
  bool hit = false;
};

/// Clip the parameter range [0, 1] of a 2D segment against [x_lo, x_hi] x
/// [y_lo, y_hi]. Boundaries are closed.
inline Clip clip_segment(double x_lo, double x_hi, double y_lo, double y_hi,
                         double x0, double y0, double dx, double dy) noexcept {
  Clip c;
  if (dx == 0.0) {
    if (!(x_lo <= x0 && x0 <= x_hi)) return c;
  } else {
    const double t1 = (x_lo - x0) / dx;
    const double t2 = (x_hi - x0) / dx;
    c.t_in = std::max(c.t_in, std::min(t1, t2));
    c.t_out = std::min(c.t_out, std::max(t1, t2));
  }
  if (dy == 0.0) {
    if (!(y_lo <= y0 && y0 <= y_hi)) return c;
  } else {
    const double t1 = (y_lo - y0) / dy;
    const double t2 = (y_hi - y0) / dy;
    c.t_in = std::max(c.t_in, std::min(t1, t2));
    c.t_out = std::min(c.t_out, std::max(t1, t2));
  }
  c.hit = c.t_in <= c.t_out;
  return c;
}

/// Lowest segment height over the clipped range; the height is affine in t.
inline double lowest_height(double h0, double dh, const Clip& c) noexcept {
  return std::min(h0 + dh * c.t_in, h0 + dh * c.t_out);
}

} // namespace uavlos::simd
