#include "dcfsim/metrics.hpp"

#include <string>

namespace dcfsim {

MetricsCollector::Status& MetricsCollector::status_of(std::uint64_t copy_id, const char* what) {
  auto it = status_.find(copy_id);
  if (it == status_.end())
    throw AccountingError(std::string(what) + " for unknown copy " + std::to_string(copy_id));
  if (it->second != Status::Open)
    throw AccountingError(std::string(what) + " for copy " + std::to_string(copy_id) +
                          " that already has a terminal outcome");
  return it->second;
}

void MetricsCollector::record_send(std::uint64_t copy_id, SimTime) {
  if (!status_.emplace(copy_id, Status::Open).second)
    throw AccountingError("copy " + std::to_string(copy_id) + " sent twice");
  ++sent_;
  ++open_;
}

void MetricsCollector::record_receive(std::uint64_t copy_id, SimTime t_rx, SimTime t_tx) {
  status_of(copy_id, "receive") = Status::Delivered;
  --open_;
  ++delivered_;
  delay_sum_ns_ += (t_rx - t_tx).count();
}

void MetricsCollector::record_drop(std::uint64_t copy_id, SimTime t, NodeId node, DropReason reason) {
  status_of(copy_id, "drop") = Status::Dropped;
  --open_;
  drops_.push_back(DropRecord{copy_id, t, node, reason});
}

bool MetricsCollector::is_open(std::uint64_t copy_id) const {
  auto it = status_.find(copy_id);
  return it != status_.end() && it->second == Status::Open;
}

MetricsReport MetricsCollector::finalize(std::optional<std::uint64_t> observed_in_flight) const {
  MetricsReport r;
  r.sent = sent_;
  r.delivered = delivered_;
  r.delay_defined = delivered_ > 0;
  r.avg_delay_s = delivered_ > 0 ? static_cast<double>(delay_sum_ns_) * 1e-9 / delivered_ : 0.0;
  for (const auto& d : drops_) {
    switch (d.reason) {
      case DropReason::Collision: ++r.collision_dropped; break;
      case DropReason::RetryLimitExceeded: ++r.retry_dropped; break;
      case DropReason::QueueOverflow: ++r.queue_dropped; break;
      case DropReason::NoRoute: ++r.noroute_dropped; break;
    }
  }
  r.mac_dropped = r.collision_dropped + r.retry_dropped;
  r.total_dropped = drops_.size();
  r.in_flight_at_end = open_;

  if (r.sent != r.delivered + r.total_dropped + r.in_flight_at_end)
    throw AccountingError("conservation violated: sent != delivered + dropped + in flight");
  if (observed_in_flight && *observed_in_flight != open_)
    throw AccountingError("conservation violated: " + std::to_string(*observed_in_flight) +
                          " copies held in queues but " + std::to_string(open_) +
                          " unresolved in the ledger");
  return r;
}

}  // namespace dcfsim
