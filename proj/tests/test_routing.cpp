#include <doctest.h>

#include <deque>
#include <set>

#include "dcfsim/mac_params.hpp"
#include "dcfsim/routing.hpp"
#include "dcfsim/scenario.hpp"

using namespace dcfsim;

namespace {

// Hop distance by breadth-first search, independent of the route table.
std::vector<int> bfs_hops(const Adjacency& adj, NodeId from) {
  std::vector<int> hops(adj.size(), -1);
  std::deque<NodeId> q{from};
  hops[from] = 0;
  while (!q.empty()) {
    const NodeId u = q.front();
    q.pop_front();
    for (NodeId v : adj[u]) {
      if (hops[v] < 0) {
        hops[v] = hops[u] + 1;
        q.push_back(v);
      }
    }
  }
  return hops;
}

}  // namespace

TEST_SUITE("routing") {
  TEST_CASE("three-node chain") {
    const Adjacency adj{{1}, {0, 2}, {1}};
    const RouteTable rt = compute_routes(adj);
    CHECK(rt.next_hop(0, 2) == NodeId{1});
    CHECK(rt.next_hop(2, 0) == NodeId{1});
    CHECK(rt.next_hop(0, 1) == NodeId{1});
    CHECK(rt.path_length(0, 2) == std::size_t{2});
    CHECK(rt.path(0, 2) == std::vector<NodeId>{0, 1, 2});
  }

  TEST_CASE("ties go to the lowest neighbour id") {
    // Diamond 0-{1,2}-3.
    const Adjacency adj{{1, 2}, {0, 3}, {0, 3}, {1, 2}};
    const RouteTable rt = compute_routes(adj);
    CHECK(rt.next_hop(0, 3) == NodeId{1});
    CHECK(rt.next_hop(3, 0) == NodeId{1});
  }

  TEST_CASE("disconnected demand is a configuration error") {
    const Adjacency adj{{1}, {0}, {}};
    const RouteTable rt = compute_routes(adj);
    CHECK_FALSE(rt.next_hop(0, 2).has_value());
    CHECK_FALSE(rt.path_length(0, 2).has_value());
    CHECK_THROWS_AS(compute_routes(adj, {{0, 2}}), ConfigError);
    CHECK_NOTHROW(compute_routes(adj, {{0, 1}}));
  }

  TEST_CASE("dumbbell paths are shortest and loop-free") {
    for (std::uint32_t n : {6u, 8u, 10u}) {
      ScenarioConfig cfg;
      cfg.n_intermediate = n;
      const Topology t = build_dumbbell(cfg);
      const RouteTable rt = compute_routes(t.adjacency);
      for (NodeId s = 0; s < t.node_count(); ++s) {
        const auto hops = bfs_hops(t.adjacency, s);
        for (NodeId d = 0; d < t.node_count(); ++d) {
          if (s == d) continue;
          REQUIRE(hops[d] > 0);
          const auto path = rt.path(s, d);
          CHECK(path.size() == std::size_t(hops[d]) + 1);
          CHECK(std::set<NodeId>(path.begin(), path.end()).size() == path.size());
        }
      }
      for (const auto& f : t.flows) CHECK(rt.path_length(f.src, f.dst) == std::size_t{n + 1});
    }
  }
}
