#pragma once

#include <chrono>
#include <cstdint>

namespace dcfsim {

/// Simulation time: integer nanoseconds since the start of a run.
using SimTime = std::chrono::nanoseconds;

using namespace std::chrono_literals;

inline double to_seconds(SimTime t) { return static_cast<double>(t.count()) * 1e-9; }

inline SimTime from_seconds(double s) {
  return SimTime{static_cast<std::int64_t>(s * 1e9 + (s >= 0 ? 0.5 : -0.5))};
}

}  // namespace dcfsim
