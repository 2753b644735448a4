#pragma once

#include <cstdint>
#include <random>

namespace uavlos {

/// SplitMix64 finalizer. Used to derive independent substream seeds from
/// (seed, stream, chunk) tuples so Monte Carlo results do not depend on how
/// work is scheduled.
std::uint64_t mix64(std::uint64_t x) noexcept;

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream,
                             std::uint64_t chunk = 0,
                             std::uint64_t sub = 0) noexcept;

/// Portable uniform source: mt19937_64 with an explicit 53-bit mantissa
/// conversion, so sequences are identical across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform();
  }
  std::uint64_t next() noexcept { return engine_(); }

private:
  std::mt19937_64 engine_;
};

} // namespace uavlos
