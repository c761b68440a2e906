#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dcfsim/mac.hpp"
#include "dcfsim/metrics.hpp"
#include "dcfsim/phy.hpp"
#include "dcfsim/routing.hpp"
#include "dcfsim/scenario.hpp"
#include "dcfsim/simulator.hpp"
#include "dcfsim/tcp.hpp"

namespace dcfsim {

struct NetworkConfig {
  MacParams mac;
  RadioParams radio;
  TcpParams tcp;
  std::uint64_t seed = 1;
  SimTime duration = std::chrono::seconds{200};
  SimTime max_prop_delay{6408};

  static NetworkConfig from(const ScenarioConfig& cfg);
};

/// A complete simulated network: one channel, a DCF MAC per node, static
/// routes, and a TCP/FTP flow per FlowSpec. Owns its simulator; one instance
/// is one run.
class Network {
 public:
  Network(const Topology& topology, const NetworkConfig& cfg);
  ~Network();
  Network(const Network&) = delete;
  Network& operator=(const Network&) = delete;

  /// Sends MAC events and drop records to `out` (one line each).
  void set_trace(std::ostream* out);

  /// Runs to the configured duration and returns the finalized report.
  MetricsReport run();

  Simulator& simulator() { return sim_; }
  const Channel& channel() const { return channel_; }
  const RouteTable& routes() const { return routes_; }
  DcfMac& mac(NodeId node) { return *macs_.at(node); }
  TcpSender& sender(FlowId flow) { return *senders_.at(flow); }
  TcpReceiver& receiver(FlowId flow) { return *receivers_.at(flow); }
  const MetricsCollector& metrics() const { return metrics_; }
  std::size_t node_count() const { return macs_.size(); }

  /// Distinct unresolved DATA copies physically held in MAC queues.
  std::uint64_t copies_in_queues() const;

 private:
  void inject(const Packet& segment);
  void forward(NodeId node, const Packet& packet);
  void arrive(NodeId node, const Packet& packet);
  void drop(NodeId node, const Packet& packet, DropReason reason);
  void on_retry_exhausted(NodeId node, const Packet& packet, TxFailure stage);

  NetworkConfig cfg_;
  Simulator sim_;
  Channel channel_;
  RouteTable routes_;
  std::vector<FlowSpec> flows_;
  std::vector<std::unique_ptr<DcfMac>> macs_;
  std::vector<std::unique_ptr<TcpSender>> senders_;
  std::vector<std::unique_ptr<TcpReceiver>> receivers_;
  MetricsCollector metrics_;
  std::ostream* trace_ = nullptr;

  std::uint64_t next_copy_id_ = 1;
  /// Node currently responsible for each open DATA copy.
  std::unordered_map<std::uint64_t, NodeId> holder_;
  /// Copies whose latest DATA attempt was destroyed at the receiver.
  std::unordered_set<std::uint64_t> data_collided_;
};

}  // namespace dcfsim
