#include "omplab/rng.hpp"

#include <cmath>
#include <numbers>

namespace omplab {

std::uint64_t CounterRng::uniform_below(std::uint64_t bound) noexcept {
  const std::uint64_t limit = bound * (UINT64_MAX / bound);
  std::uint64_t r;
  do {
    r = next_u64();
  } while (r >= limit);
  return r % bound;
}

double CounterRng::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // 1 - uniform() lies in (0, 1], keeping the logarithm finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace omplab
