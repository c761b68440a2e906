#include "dcfsim/frame.hpp"

#include <cmath>
#include <string>


namespace dcfsim {

std::string_view to_string(FrameKind kind) {
  switch (kind) {
    case FrameKind::Rts: return "RTS";
    case FrameKind::Cts: return "CTS";
    case FrameKind::Data: return "DATA";
    case FrameKind::Ack: return "ACK";
  }
  return "?";
}

SimTime airtime(std::uint32_t bytes, double bandwidth_bps, SimTime plcp) {
  const double ns = static_cast<double>(bytes) * 8.0 * 1e9 / bandwidth_bps;
  return plcp + SimTime{static_cast<std::int64_t>(std::llround(ns))};
}

}  // namespace dcfsim
