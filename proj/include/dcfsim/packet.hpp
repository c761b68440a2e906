#pragma once

#include <cstdint>

#include "dcfsim/time.hpp"

namespace dcfsim {

using NodeId = std::uint32_t;
using FlowId = std::uint32_t;

enum class SegmentKind : std::uint8_t { Data, Ack };

/// A transport segment as handed to the network layer. Every transmission of a
/// TCP segment (original or retransmitted) is a distinct copy with its own
/// copy_id; metrics account per copy.
struct Packet {
  std::uint64_t copy_id = 0;
  FlowId flow_id = 0;
  SegmentKind kind = SegmentKind::Data;
  std::int64_t seq = 0;
  std::uint32_t size_bytes = 0;
  NodeId origin = 0;
  NodeId destination = 0;
  SimTime sent_at{0};
};

}  // namespace dcfsim
