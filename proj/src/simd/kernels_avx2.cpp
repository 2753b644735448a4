#include <immintrin.h>

#include "uavlos/simd/kernels.hpp"

namespace uavlos::simd::detail {
namespace {

// Four prisms per iteration. Mirrors clip_segment()/lowest_height() exactly:
// same divisions, same min/max sequence, no fused operations.
struct Lanes {
  __m256d t_in;
  __m256d t_out;
  __m256d hit; // all-ones where the footprint is touched
};

inline void clip_axis(__m256d lo, __m256d hi, double p, double d,
                      __m256d& t_in, __m256d& t_out, __m256d& valid) {
  const __m256d vp = _mm256_set1_pd(p);
  if (d == 0.0) {
    const __m256d inside = _mm256_and_pd(_mm256_cmp_pd(lo, vp, _CMP_LE_OQ),
                                         _mm256_cmp_pd(vp, hi, _CMP_LE_OQ));
    valid = _mm256_and_pd(valid, inside);
    return;
  }
  const __m256d vd = _mm256_set1_pd(d);
  const __m256d t1 = _mm256_div_pd(_mm256_sub_pd(lo, vp), vd);
  const __m256d t2 = _mm256_div_pd(_mm256_sub_pd(hi, vp), vd);
  t_in = _mm256_max_pd(t_in, _mm256_min_pd(t1, t2));
  t_out = _mm256_min_pd(t_out, _mm256_max_pd(t1, t2));
}

inline Lanes clip4(const BoxView& b, std::size_t i, const SegmentQuery& q) {
  __m256d t_in = _mm256_setzero_pd();
  __m256d t_out = _mm256_set1_pd(1.0);
  __m256d valid = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
  clip_axis(_mm256_loadu_pd(&b.x_lo[i]), _mm256_loadu_pd(&b.x_hi[i]), q.x0,
            q.dx, t_in, t_out, valid);
  clip_axis(_mm256_loadu_pd(&b.y_lo[i]), _mm256_loadu_pd(&b.y_hi[i]), q.y0,
            q.dy, t_in, t_out, valid);
  const __m256d ordered = _mm256_cmp_pd(t_in, t_out, _CMP_LE_OQ);
  return {t_in, t_out, _mm256_and_pd(valid, ordered)};
}

BoxView tail_of(const BoxView& b, std::size_t i) {
  return {b.x_lo.subspan(i), b.x_hi.subspan(i), b.y_lo.subspan(i),
          b.y_hi.subspan(i), b.top.subspan(i)};
}

} // namespace

bool any_blocking_avx2(const BoxView& boxes, const SegmentQuery& q) {
  const std::size_t n = boxes.size();
  const __m256d h0 = _mm256_set1_pd(q.h0);
  const __m256d dh = _mm256_set1_pd(q.dh);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const Lanes l = clip4(boxes, i, q);
    if (_mm256_movemask_pd(l.hit) == 0) continue;
    const __m256d h_in = _mm256_add_pd(h0, _mm256_mul_pd(dh, l.t_in));
    const __m256d h_out = _mm256_add_pd(h0, _mm256_mul_pd(dh, l.t_out));
    const __m256d lowest = _mm256_min_pd(h_in, h_out);
    const __m256d top = _mm256_loadu_pd(&boxes.top[i]);
    const __m256d blocked =
        _mm256_and_pd(l.hit, _mm256_cmp_pd(top, lowest, _CMP_GE_OQ));
    if (_mm256_movemask_pd(blocked) != 0) return true;
  }
  return i < n && any_blocking_scalar(tail_of(boxes, i), q);
}

std::size_t count_crossings_avx2(const BoxView& boxes, const SegmentQuery& q) {
  const std::size_t n = boxes.size();
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const Lanes l = clip4(boxes, i, q);
    count += static_cast<std::size_t>(
        __builtin_popcount(static_cast<unsigned>(_mm256_movemask_pd(l.hit))));
  }
  if (i < n) count += count_crossings_scalar(tail_of(boxes, i), q);
  return count;
}

} // namespace uavlos::simd::detail
