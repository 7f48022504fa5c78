#pragma once

// Seeded randomness. All sampling in the library draws from Rng so that a
// run is reproducible from its seed alone.

#include <cstdint>
#include <random>
#include <stdexcept>

namespace tpcone {

/// mt19937_64 (whose output sequence is fixed by the standard) plus unbiased
/// bounded integers by rejection, so draws are identical across standard
/// library implementations.
class Rng {
 public:
  static constexpr std::uint64_t kDefaultSeed = 20240601;

  explicit Rng(std::uint64_t seed = kDefaultSeed) : engine_(seed) {}

  /// Uniform integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw std::invalid_argument("Rng::uniform: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(engine_());
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tpcone
