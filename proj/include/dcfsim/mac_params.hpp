#pragma once

#include <cstdint>
#include <stdexcept>

#include "dcfsim/time.hpp"

namespace dcfsim {

/// Raised for any invalid user-supplied configuration value.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// DCF tunables. Timings are the 802.11 DSSS set.
struct MacParams {
  SimTime slot_time = 20us;
  SimTime sifs = 10us;
  SimTime difs = 50us;
  std::uint32_t cw_min = 31;
  std::uint32_t cw_max = 1023;
  std::uint32_t short_retry_limit = 7;
  std::uint32_t long_retry_limit = 4;
  std::uint32_t rts_threshold_bytes = 0;
  SimTime plcp_overhead = 192us;
  std::uint32_t queue_capacity = 50;

  /// Throws ConfigError on any violated invariant.
  void validate() const;
};

/// True for 2^k - 1 with k >= 1.
constexpr bool is_window_value(std::uint32_t v) { return v != 0 && ((v + 1) & v) == 0; }

}  // namespace dcfsim
