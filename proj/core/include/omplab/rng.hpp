#pragma once

#include <cstdint>

namespace omplab {

/// SplitMix64 finalizer (Steele, Lea & Flood 2014). Bijective on 64 bits.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for an independent sub-stream: `seed ^ mix64(stream + constant)`.
/// Trials, cells and component draws (matrix, signal, noise) each get their
/// own stream, so results do not depend on evaluation order.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return seed ^ mix64(stream + 0x632be59bd9b4e019ULL);
}

/// Counter-based generator: output i is mix64(seed + (i + 1) * golden_gamma),
/// i.e. SplitMix64 with an explicit counter. The algorithm is fixed so
/// streams are bit-reproducible on every platform.
///
/// Normals use the Box-Muller transform on two 53-bit uniforms; the standard
/// library distributions are avoided because their algorithms are
/// implementation-defined.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t next_u64() noexcept {
    ++counter_;
    return mix64(seed_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer on [0, bound); bound must be positive. Rejection keeps it unbiased.
  std::uint64_t uniform_below(std::uint64_t bound) noexcept;

  /// Standard normal deviate.
  double normal() noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace omplab
