#include "dcfsim/routing.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "dcfsim/mac_params.hpp"

namespace dcfsim {

RouteTable::RouteTable(std::size_t node_count) : n_{node_count}, next_(node_count * node_count, kNone) {}

std::optional<NodeId> RouteTable::next_hop(NodeId at, NodeId dst) const {
  if (at >= n_ || dst >= n_) return std::nullopt;
  const NodeId nh = next_[at * n_ + dst];
  if (nh == kNone) return std::nullopt;
  return nh;
}

std::vector<NodeId> RouteTable::path(NodeId src, NodeId dst) const {
  std::vector<NodeId> hops{src};
  NodeId at = src;
  while (at != dst) {
    const auto nh = next_hop(at, dst);
    if (!nh || hops.size() > n_) return {};
    at = *nh;
    hops.push_back(at);
  }
  return hops;
}

std::optional<std::size_t> RouteTable::path_length(NodeId src, NodeId dst) const {
  const auto p = path(src, dst);
  if (p.empty()) return std::nullopt;
  return p.size() - 1;
}

RouteTable compute_routes(const Adjacency& adjacency) {
  const std::size_t n = adjacency.size();
  RouteTable table(n);
  constexpr std::size_t kInf = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dist(n);
  for (NodeId dst = 0; dst < n; ++dst) {
    std::fill(dist.begin(), dist.end(), kInf);
    dist[dst] = 0;
    std::deque<NodeId> frontier{dst};
    while (!frontier.empty()) {
      const NodeId u = frontier.front();
      frontier.pop_front();
      for (NodeId v : adjacency[u]) {
        if (dist[v] == kInf) {
          dist[v] = dist[u] + 1;
          frontier.push_back(v);
        }
      }
    }
    for (NodeId at = 0; at < n; ++at) {
      if (at == dst || dist[at] == kInf) continue;
      NodeId best = RouteTable::kNone;
      for (NodeId v : adjacency[at]) {
        if (dist[v] + 1 == dist[at] && v < best) best = v;
      }
      table.next_[at * n + dst] = best;
    }
  }
  return table;
}

RouteTable compute_routes(const Adjacency& adjacency,
                          const std::vector<std::pair<NodeId, NodeId>>& demands) {
  RouteTable table = compute_routes(adjacency);
  for (const auto& [src, dst] : demands) {
    if (!table.path_length(src, dst)) {
      throw ConfigError("no route from node " + std::to_string(src) + " to node " +
                        std::to_string(dst));
    }
  }
  return table;
}

}  // namespace dcfsim
