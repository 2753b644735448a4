#pragma once

// Batched segment-vs-prism kernels. Every backend must produce bit-identical
// decisions to the scalar reference; the library is built with
// -ffp-contract=off so no backend fuses the multiply-adds.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace uavlos::simd {

/// Read-only structure-of-arrays view of axis-aligned prisms standing on the
/// ground plane.
struct BoxView {
  std::span<const double> x_lo;
  std::span<const double> x_hi;
  std::span<const double> y_lo;
  std::span<const double> y_hi;
  std::span<const double> top;

  std::size_t size() const noexcept { return top.size(); }
};

class BoxColumns {
public:
  void reserve(std::size_t n);
  void push_back(double x_lo, double x_hi, double y_lo, double y_hi,
                 double top);
  std::size_t size() const noexcept { return top_.size(); }
  bool empty() const noexcept { return top_.empty(); }
  BoxView view() const noexcept {
    return {x_lo_, x_hi_, y_lo_, y_hi_, top_};
  }

private:
  std::vector<double> x_lo_, x_hi_, y_lo_, y_hi_, top_;
};

/// A 3D segment p(t) = origin + t * delta, t in [0, 1].
struct SegmentQuery {
  double x0, y0, h0;
  double dx, dy, dh;
};

enum class Backend { scalar, avx2, neon };

std::string_view backend_name(Backend b) noexcept;

struct KernelTable {
  Backend backend;
  /// True if any prism blocks the segment (early exit).
  bool (*any_blocking)(const BoxView&, const SegmentQuery&);
  /// Number of prisms whose footprint the horizontal projection touches.
  std::size_t (*count_crossings)(const BoxView&, const SegmentQuery&);
};

/// Compiled in and supported by the running CPU.
bool available(Backend b) noexcept;

/// Throws std::invalid_argument if the backend is not available.
const KernelTable& kernels(Backend b);

Backend best_backend() noexcept;

/// Kernels used by the LOS engine. Defaults to best_backend().
const KernelTable& active_kernels() noexcept;

void set_active_backend(Backend b);

namespace detail {
// Per-backend entry points; only those compiled in are defined.
bool any_blocking_scalar(const BoxView&, const SegmentQuery&);
std::size_t count_crossings_scalar(const BoxView&, const SegmentQuery&);
bool any_blocking_avx2(const BoxView&, const SegmentQuery&);
std::size_t count_crossings_avx2(const BoxView&, const SegmentQuery&);
bool any_blocking_neon(const BoxView&, const SegmentQuery&);
std::size_t count_crossings_neon(const BoxView&, const SegmentQuery&);
} // namespace detail

} // namespace uavlos::simd
