#include "uavlos/simd/kernels.hpp"
#include "uavlos/simd/slab.hpp"

namespace uavlos::simd::detail {

bool any_blocking_scalar(const BoxView& boxes, const SegmentQuery& q) {
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const Clip c = clip_segment(boxes.x_lo[i], boxes.x_hi[i], boxes.y_lo[i],
                                boxes.y_hi[i], q.x0, q.y0, q.dx, q.dy);
    if (c.hit && boxes.top[i] >= lowest_height(q.h0, q.dh, c)) return true;
  }
  return false;
}

std::size_t count_crossings_scalar(const BoxView& boxes,
                                   const SegmentQuery& q) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const Clip c = clip_segment(boxes.x_lo[i], boxes.x_hi[i], boxes.y_lo[i],
                                boxes.y_hi[i], q.x0, q.y0, q.dx, q.dy);
    n += c.hit ? 1 : 0;
  }
  return n;
}

} // namespace uavlos::simd::detail
