#pragma once

#include <cstdint>
#include <random>

namespace dcfsim {

/// Seeded pseudo-random source. The engine (mt19937_64) and the reduction to
/// ranges are both fully specified here, so draws are identical on every
/// platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_{seed}, engine_{seed} {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, upper], inclusive.
  std::uint64_t uniform_int(std::uint64_t upper);

  /// Uniform double in [0, 1).
  double uniform01();

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace dcfsim
