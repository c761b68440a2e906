#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "dcfsim/mac.hpp"
#include "dcfsim/packet.hpp"

namespace dcfsim {

/// An internal bookkeeping inconsistency: always a simulator bug.
class AccountingError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct DropRecord {
  std::uint64_t copy_id = 0;
  SimTime time{0};
  NodeId node = 0;
  DropReason reason = DropReason::QueueOverflow;
};

/// One run's outcome.
struct MetricsReport {
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  double avg_delay_s = 0.0;
  /// False when nothing was delivered; avg_delay_s is then reported as 0.
  bool delay_defined = false;
  std::uint64_t total_dropped = 0;
  std::uint64_t mac_dropped = 0;
  std::uint64_t collision_dropped = 0;
  std::uint64_t retry_dropped = 0;
  std::uint64_t queue_dropped = 0;
  std::uint64_t noroute_dropped = 0;
  std::uint64_t in_flight_at_end = 0;

  bool operator==(const MetricsReport&) const = default;
};

/// Per-copy accounting of transport DATA packets. Each copy that enters the
/// network ends in exactly one of delivered / dropped, or is still in flight
/// when the run stops.
class MetricsCollector {
 public:
  void record_send(std::uint64_t copy_id, SimTime t);
  void record_receive(std::uint64_t copy_id, SimTime t_rx, SimTime t_tx);
  void record_drop(std::uint64_t copy_id, SimTime t, NodeId node, DropReason reason);

  bool is_open(std::uint64_t copy_id) const;
  std::uint64_t open_count() const { return open_; }
  const std::vector<DropRecord>& drops() const { return drops_; }

  /// Builds the report. If `observed_in_flight` is given it must match the
  /// number of open copies, otherwise AccountingError is thrown.
  MetricsReport finalize(std::optional<std::uint64_t> observed_in_flight = std::nullopt) const;

 private:
  enum class Status : std::uint8_t { Open, Delivered, Dropped };
  Status& status_of(std::uint64_t copy_id, const char* what);

  std::unordered_map<std::uint64_t, Status> status_;
  std::uint64_t sent_ = 0;
  std::uint64_t delivered_ = 0;
  std::uint64_t open_ = 0;
  std::int64_t delay_sum_ns_ = 0;
  std::vector<DropRecord> drops_;
};

}  // namespace dcfsim
