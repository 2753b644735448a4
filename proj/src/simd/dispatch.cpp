#include <atomic>
#include <stdexcept>
#include <string>

#include "uavlos/simd/kernels.hpp"

namespace uavlos::simd {

void BoxColumns::reserve(std::size_t n) {
  x_lo_.reserve(n);
  x_hi_.reserve(n);
  y_lo_.reserve(n);
  y_hi_.reserve(n);
  top_.reserve(n);
}

void BoxColumns::push_back(double x_lo, double x_hi, double y_lo, double y_hi,
                           double top) {
  x_lo_.push_back(x_lo);
  x_hi_.push_back(x_hi);
  y_lo_.push_back(y_lo);
  y_hi_.push_back(y_hi);
  top_.push_back(top);
}

std::string_view backend_name(Backend b) noexcept {
  switch (b) {
  case Backend::scalar: return "scalar";
  case Backend::avx2: return "avx2";
  case Backend::neon: return "neon";
  }
  return "unknown";
}

namespace {

constexpr KernelTable kScalar{Backend::scalar, &detail::any_blocking_scalar,
                              &detail::count_crossings_scalar};
#if defined(UAVLOS_HAVE_AVX2_KERNEL)
constexpr KernelTable kAvx2{Backend::avx2, &detail::any_blocking_avx2,
                            &detail::count_crossings_avx2};
#endif
#if defined(__aarch64__)
constexpr KernelTable kNeon{Backend::neon, &detail::any_blocking_neon,
                            &detail::count_crossings_neon};
#endif

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{&kernels(best_backend())};
  return slot;
}

} // namespace

bool available(Backend b) noexcept {
  switch (b) {
  case Backend::scalar: return true;
  case Backend::avx2:
#if defined(UAVLOS_HAVE_AVX2_KERNEL)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
  case Backend::neon:
#if defined(__aarch64__)
    return true;
#else
    return false;
#endif
  }
  return false;
}

const KernelTable& kernels(Backend b) {
  if (!available(b)) {
    throw std::invalid_argument("SIMD backend not available: " +
                                std::string(backend_name(b)));
  }
  switch (b) {
#if defined(UAVLOS_HAVE_AVX2_KERNEL)
  case Backend::avx2: return kAvx2;
#endif
#if defined(__aarch64__)
  case Backend::neon: return kNeon;
#endif
  default: return kScalar;
  }
}

Backend best_backend() noexcept {
  if (available(Backend::avx2)) return Backend::avx2;
  if (available(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}

const KernelTable& active_kernels() noexcept {
  return *active_slot().load(std::memory_order_acquire);
}

void set_active_backend(Backend b) {
  active_slot().store(&kernels(b), std::memory_order_release);
}

} // namespace uavlos::simd
