#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "dcfsim/packet.hpp"
#include "dcfsim/time.hpp"

namespace dcfsim {

enum class FrameKind : std::uint8_t { Rts, Cts, Data, Ack };

std::string_view to_string(FrameKind kind);

/// MAC header (+FCS) bytes per frame kind.
constexpr std::uint32_t mac_overhead_bytes(FrameKind kind) {
  switch (kind) {
    case FrameKind::Rts: return 20;
    case FrameKind::Cts: return 14;
    case FrameKind::Data: return 34;
    case FrameKind::Ack: return 14;
  }
  return 0;
}

/// An on-air MAC frame. Only DATA frames carry a packet.
struct Frame {
  FrameKind kind = FrameKind::Data;
  NodeId src = 0;
  NodeId dst = 0;
  std::uint32_t payload_bytes = 0;
  /// NAV reservation that follows the end of this frame.
  SimTime duration_field{0};
  /// Per-sender sequence number of the MSDU, used for duplicate filtering.
  std::uint64_t mac_seq = 0;
  std::optional<Packet> packet;

  std::uint32_t size_bytes() const { return mac_overhead_bytes(kind) + payload_bytes; }
};

/// Airtime of `bytes` at `bandwidth_bps` plus a fixed preamble/header time,
/// rounded to the nearest nanosecond.
SimTime airtime(std::uint32_t bytes, double bandwidth_bps, SimTime plcp);

inline SimTime frame_tx_duration(const Frame& f, double bandwidth_bps, SimTime plcp) {
  return airtime(f.size_bytes(), bandwidth_bps, plcp);
}

}  // namespace dcfsim
