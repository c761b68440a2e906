#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dcfsim/mac_params.hpp"
#include "dcfsim/phy.hpp"
#include "dcfsim/routing.hpp"
#include "dcfsim/tcp.hpp"

namespace dcfsim {

struct ScenarioConfig {
  std::uint32_t n_intermediate = 6;
  SimTime duration = std::chrono::seconds{200};
  double node_spacing = 200.0;
  double field_x = 1500.0;  // descriptive only
  double field_y = 1200.0;
  std::uint32_t n_flows = 4;
  std::uint32_t payload = 1500;
  std::uint64_t seed = 1;
  /// Angle of the edge nodes above/below the chain axis, in degrees.
  double edge_angle_deg = 30.0;
  SimTime flow_stagger = std::chrono::seconds{1};
  bool allow_any_n = false;
  MacParams mac;
  RadioParams radio;
  TcpParams tcp;

  /// Throws ConfigError.
  void validate() const;
  /// Longest possible propagation delay: the field diagonal.
  SimTime max_propagation_delay() const;
};

struct FlowSpec {
  FlowId id = 0;
  NodeId src = 0;
  NodeId dst = 0;
  SimTime start_time{0};
};

struct Topology {
  std::vector<Position> positions;
  std::vector<std::string> names;
  Adjacency adjacency;
  std::vector<FlowSpec> flows;

  std::size_t node_count() const { return positions.size(); }
};

/// Pairs of nodes within nominal decode range of each other.
Adjacency decode_adjacency(const std::vector<Position>& positions, const RadioParams& radio);

/// Dumbbell: L1, L2 fan into a chain I1..In that fans out to R1, R2. Node ids
/// are L1=0, L2=1, I1..In=2..n+1, R1=n+2, R2=n+3. Flows L1->R1, L1->R2,
/// L2->R1, L2->R2 start one stagger apart.
Topology build_dumbbell(const ScenarioConfig& cfg);

/// Straight line of `n` nodes at `spacing` metres, with the given flows.
Topology build_chain(std::size_t n, double spacing, std::vector<FlowSpec> flows,
                     const RadioParams& radio);

}  // namespace dcfsim
