#include "dcfsim/rng.hpp"

#include <limits>

namespace dcfsim {

std::uint64_t Rng::uniform_int(std::uint64_t upper) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  if (upper == kMax) return next();
  const std::uint64_t range = upper + 1;
  // 2^64 mod range; draws above kMax - tail would bias the modulo reduction.
  const std::uint64_t tail = (kMax % range + 1) % range;
  const std::uint64_t limit = kMax - tail;
  std::uint64_t x = next();
  while (x > limit) x = next();
  return x % range;
}

double Rng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

}  // namespace dcfsim
