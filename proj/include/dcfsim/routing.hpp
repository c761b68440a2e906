#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "dcfsim/packet.hpp"

namespace dcfsim {

/// Undirected neighbor lists indexed by node id.
using Adjacency = std::vector<std::vector<NodeId>>;

/// Static minimum-hop next-hop table. Ties go to the lowest neighbor id.
class RouteTable {
 public:
  RouteTable() = default;
  explicit RouteTable(std::size_t node_count);

  std::optional<NodeId> next_hop(NodeId at, NodeId dst) const;
  /// Hop count along the table, or nullopt if unreachable.
  std::optional<std::size_t> path_length(NodeId src, NodeId dst) const;
  std::vector<NodeId> path(NodeId src, NodeId dst) const;
  std::size_t node_count() const { return n_; }

 private:
  friend RouteTable compute_routes(const Adjacency& adjacency);
  static constexpr NodeId kNone = static_cast<NodeId>(-1);
  std::size_t n_ = 0;
  std::vector<NodeId> next_;  // next_[at * n_ + dst]
};

RouteTable compute_routes(const Adjacency& adjacency);

/// As above, but throws ConfigError if any (src, dst) demand is unreachable.
RouteTable compute_routes(const Adjacency& adjacency,
                          const std::vector<std::pair<NodeId, NodeId>>& demands);

}  // namespace dcfsim
