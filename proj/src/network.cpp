#include "dcfsim/network.hpp"

#include <ostream>

#include <fmt/format.h>

namespace dcfsim {

NetworkConfig NetworkConfig::from(const ScenarioConfig& cfg) {
  NetworkConfig n;
  n.mac = cfg.mac;
  n.radio = cfg.radio;
  n.tcp = cfg.tcp;
  n.seed = cfg.seed;
  n.duration = cfg.duration;
  n.max_prop_delay = cfg.max_propagation_delay();
  return n;
}

namespace {

std::vector<std::pair<NodeId, NodeId>> demands_of(const std::vector<FlowSpec>& flows) {
  std::vector<std::pair<NodeId, NodeId>> d;
  for (const auto& f : flows) {
    d.emplace_back(f.src, f.dst);
    d.emplace_back(f.dst, f.src);
  }
  return d;
}

}  // namespace

Network::Network(const Topology& topology, const NetworkConfig& cfg)
    : cfg_{cfg},
      sim_{cfg.seed},
      channel_{sim_, cfg.radio, topology.positions},
      routes_{compute_routes(topology.adjacency, demands_of(topology.flows))},
      flows_{topology.flows} {
  cfg_.mac.validate();
  cfg_.tcp.validate();

  for (NodeId id = 0; id < topology.node_count(); ++id) {
    MacHooks hooks;
    hooks.deliver = [this, id](const Packet& p, NodeId) {
      if (p.kind == SegmentKind::Data) holder_[p.copy_id] = id;
      forward(id, p);
    };
    hooks.retry_exhausted = [this, id](const Packet& p, NodeId, TxFailure stage) {
      on_retry_exhausted(id, p, stage);
    };
    hooks.data_attempt = [this](const Packet& p) { data_collided_.erase(p.copy_id); };
    hooks.data_collision = [this](const Packet& p, NodeId) { data_collided_.insert(p.copy_id); };
    macs_.push_back(std::make_unique<DcfMac>(sim_, channel_, id, cfg_.mac, cfg_.max_prop_delay,
                                             std::move(hooks)));
  }

  for (FlowId f = 0; f < flows_.size(); ++f) {
    const FlowSpec& spec = flows_[f];
    if (spec.id != f) throw ConfigError("flow ids must be 0..n-1 in order");
    auto emit = [this](const Packet& p) { inject(p); };
    senders_.push_back(std::make_unique<TcpSender>(sim_, cfg_.tcp, f, spec.src, spec.dst, emit));
    receivers_.push_back(std::make_unique<TcpReceiver>(cfg_.tcp, f, spec.dst, spec.src, emit));
  }
}

Network::~Network() = default;

void Network::set_trace(std::ostream* out) {
  trace_ = out;
  for (auto& m : macs_) m->set_trace(out);
}

MetricsReport Network::run() {
  for (FlowId f = 0; f < flows_.size(); ++f) {
    if (flows_[f].start_time < cfg_.duration)
      sim_.schedule_at(flows_[f].start_time, [this, f] { senders_[f]->start(); });
  }
  sim_.run_until(cfg_.duration);
  return metrics_.finalize(copies_in_queues());
}

std::uint64_t Network::copies_in_queues() const {
  std::unordered_set<std::uint64_t> seen;
  for (const auto& m : macs_) {
    m->for_each_queued([&](const Packet& p) {
      if (p.kind == SegmentKind::Data && metrics_.is_open(p.copy_id)) seen.insert(p.copy_id);
    });
  }
  return seen.size();
}

void Network::inject(const Packet& segment) {
  Packet p = segment;
  p.copy_id = next_copy_id_++;
  if (p.kind == SegmentKind::Data) {
    metrics_.record_send(p.copy_id, sim_.now());
    holder_[p.copy_id] = p.origin;
  }
  forward(p.origin, p);
}

void Network::forward(NodeId node, const Packet& packet) {
  if (node == packet.destination) {
    arrive(node, packet);
    return;
  }
  const auto next = routes_.next_hop(node, packet.destination);
  if (!next) {
    drop(node, packet, DropReason::NoRoute);
    return;
  }
  if (macs_[node]->enqueue(packet, *next) == DcfMac::EnqueueResult::Dropped)
    drop(node, packet, DropReason::QueueOverflow);
}

void Network::arrive(NodeId node, const Packet& packet) {
  if (packet.kind == SegmentKind::Data) {
    metrics_.record_receive(packet.copy_id, sim_.now(), packet.sent_at);
    holder_.erase(packet.copy_id);
    data_collided_.erase(packet.copy_id);
    if (trace_)
      *trace_ << fmt::format("{} {} RECV DATA flow={} seq={} copy={}\n", sim_.now().count(), node,
                             packet.flow_id, packet.seq, packet.copy_id);
    receivers_.at(packet.flow_id)->on_receive_data(packet);
  } else {
    senders_.at(packet.flow_id)->on_ack_packet(packet);
  }
}

void Network::drop(NodeId node, const Packet& packet, DropReason reason) {
  if (packet.kind != SegmentKind::Data) return;
  metrics_.record_drop(packet.copy_id, sim_.now(), node, reason);
  holder_.erase(packet.copy_id);
  data_collided_.erase(packet.copy_id);
  if (trace_)
    *trace_ << fmt::format("{} {} D {} flow={} seq={} copy={}\n", sim_.now().count(), node,
                           to_string(reason), packet.flow_id, packet.seq, packet.copy_id);
}

void Network::on_retry_exhausted(NodeId node, const Packet& packet, TxFailure stage) {
  if (packet.kind != SegmentKind::Data) return;
  // A copy the next hop already accepted (its ACK was lost) lives on there.
  const auto it = holder_.find(packet.copy_id);
  if (it == holder_.end() || it->second != node) return;
  const bool collided = stage == TxFailure::Data && data_collided_.contains(packet.copy_id);
  drop(node, packet, collided ? DropReason::Collision : DropReason::RetryLimitExceeded);
}

}  // namespace dcfsim
