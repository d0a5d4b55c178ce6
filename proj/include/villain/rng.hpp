#pragma once

#include <cstdint>
#include <random>

namespace villain {

/// 64-bit Mersenne twister (period 2^19937 - 1) keyed by (seed, stream).
/// Distinct streams come from distinct seed_seq expansions, so chains with the
/// same seed and different indices are independent and individually
/// reproducible. Uniform variates are built from the top 53 bits directly so
/// the stream does not depend on the standard library's distribution code.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x5eedu};
    engine_.seed(seq);
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [-w, w).
  double symmetric(double w) { return w * (2.0 * uniform() - 1.0); }

  bool coin() { return (engine_() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace villain
