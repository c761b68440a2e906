#pragma once

#include <cstdint>
#include <vector>

#include "dcfsim/rng.hpp"

namespace dcfsim::testing {

/// Upper 1% point of the chi-square distribution with 31 degrees of freedom.
inline constexpr double kChiSquare31At1Percent = 52.191;

/// Pearson statistic for `draws` samples of uniform_int(upper).
inline double uniform_chi_square(Rng& rng, std::uint64_t upper, std::size_t draws,
                                 double* mean_out = nullptr) {
  std::vector<std::size_t> counts(upper + 1, 0);
  double sum = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    const auto v = rng.uniform_int(upper);
    ++counts.at(v);
    sum += double(v);
  }
  const double expected = double(draws) / double(upper + 1);
  double chi = 0.0;
  for (auto c : counts) chi += (double(c) - expected) * (double(c) - expected) / expected;
  if (mean_out) *mean_out = sum / double(draws);
  return chi;
}

/// Reno window growth without loss, one entry per new ACK.
inline std::vector<double> lossless_cwnd_schedule(double ssthresh, double max_window,
                                                  std::size_t acks) {
  std::vector<double> out;
  double cwnd = 1.0;
  for (std::size_t i = 0; i < acks; ++i) {
    cwnd = cwnd < ssthresh ? cwnd + 1.0 : cwnd + 1.0 / cwnd;
    if (cwnd > max_window) cwnd = max_window;
    out.push_back(cwnd);
  }
  return out;
}

/// ACKs needed to cover `rounds` window rounds: each round sends the
/// whole usable window and each of its ACKs grows cwnd.
inline std::size_t acks_in_rounds(double ssthresh, double max_window, int rounds) {
  double cwnd = 1.0;
  std::size_t acks = 0;
  for (int r = 0; r < rounds; ++r) {
    const auto window = static_cast<std::size_t>(cwnd < max_window ? cwnd : max_window);
    for (std::size_t k = 0; k < window; ++k) {
      cwnd = cwnd < ssthresh ? cwnd + 1.0 : cwnd + 1.0 / cwnd;
      if (cwnd > max_window) cwnd = max_window;
    }
    acks += window;
  }
  return acks;
}

}  // namespace dcfsim::testing
