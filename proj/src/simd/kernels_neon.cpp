#include <arm_neon.h>

#include "uavlos/simd/kernels.hpp"

namespace uavlos::simd::detail {
namespace {

struct Lanes {
  float64x2_t t_in;
  float64x2_t t_out;
  uint64x2_t hit;
};

inline void clip_axis(float64x2_t lo, float64x2_t hi, double p, double d,
                      float64x2_t& t_in, float64x2_t& t_out,
                      uint64x2_t& valid) {
  const float64x2_t vp = vdupq_n_f64(p);
  if (d == 0.0) {
    valid = vandq_u64(valid, vandq_u64(vcleq_f64(lo, vp), vcleq_f64(vp, hi)));
    return;
  }
  const float64x2_t vd = vdupq_n_f64(d);
  const float64x2_t t1 = vdivq_f64(vsubq_f64(lo, vp), vd);
  const float64x2_t t2 = vdivq_f64(vsubq_f64(hi, vp), vd);
  t_in = vmaxq_f64(t_in, vminq_f64(t1, t2));
  t_out = vminq_f64(t_out, vmaxq_f64(t1, t2));
}

inline Lanes clip2(const BoxView& b, std::size_t i, const SegmentQuery& q) {
  float64x2_t t_in = vdupq_n_f64(0.0);
  float64x2_t t_out = vdupq_n_f64(1.0);
  uint64x2_t valid = vdupq_n_u64(~0ULL);
  clip_axis(vld1q_f64(&b.x_lo[i]), vld1q_f64(&b.x_hi[i]), q.x0, q.dx, t_in,
            t_out, valid);
  clip_axis(vld1q_f64(&b.y_lo[i]), vld1q_f64(&b.y_hi[i]), q.y0, q.dy, t_in,
            t_out, valid);
  return {t_in, t_out, vandq_u64(valid, vcleq_f64(t_in, t_out))};
}

inline bool any_lane(uint64x2_t m) {
  return (vgetq_lane_u64(m, 0) | vgetq_lane_u64(m, 1)) != 0;
}

BoxView tail_of(const BoxView& b, std::size_t i) {
  return {b.x_lo.subspan(i), b.x_hi.subspan(i), b.y_lo.subspan(i),
          b.y_hi.subspan(i), b.top.subspan(i)};
}

} // namespace

bool any_blocking_neon(const BoxView& boxes, const SegmentQuery& q) {
  const std::size_t n = boxes.size();
  const float64x2_t h0 = vdupq_n_f64(q.h0);
  const float64x2_t dh = vdupq_n_f64(q.dh);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const Lanes l = clip2(boxes, i, q);
    if (!any_lane(l.hit)) continue;
    // vmulq + vaddq, never vfmaq: must round like the scalar path.
    const float64x2_t h_in = vaddq_f64(h0, vmulq_f64(dh, l.t_in));
    const float64x2_t h_out = vaddq_f64(h0, vmulq_f64(dh, l.t_out));
    const float64x2_t lowest = vminq_f64(h_in, h_out);
    const uint64x2_t blocked =
        vandq_u64(l.hit, vcgeq_f64(vld1q_f64(&boxes.top[i]), lowest));
    if (any_lane(blocked)) return true;
  }
  return i < n && any_blocking_scalar(tail_of(boxes, i), q);
}

std::size_t count_crossings_neon(const BoxView& boxes, const SegmentQuery& q) {
  const std::size_t n = boxes.size();
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const Lanes l = clip2(boxes, i, q);
    count += (vgetq_lane_u64(l.hit, 0) != 0) + (vgetq_lane_u64(l.hit, 1) != 0);
  }
  if (i < n) count += count_crossings_scalar(tail_of(boxes, i), q);
  return count;
}

} // namespace uavlos::simd::detail
