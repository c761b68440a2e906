#include "dcfsim/scenario.hpp"

#include <cmath>
#include <numbers>

namespace dcfsim {

void ScenarioConfig::validate() const {
  if (allow_any_n) {
    if (n_intermediate < 1) throw ConfigError("n_intermediate must be at least 1");
  } else if (n_intermediate != 6 && n_intermediate != 8 && n_intermediate != 10) {
    throw ConfigError("n_intermediate must be 6, 8 or 10 (use --allow-any-n to override)");
  }
  if (duration < SimTime{0}) throw ConfigError("duration must be non-negative");
  if (!(node_spacing > 0)) throw ConfigError("node_spacing must be positive");
  if (!(field_x > 0) || !(field_y > 0)) throw ConfigError("field dimensions must be positive");
  if (n_flows < 1 || n_flows > 4) throw ConfigError("n_flows must be between 1 and 4");
  if (payload < 1) throw ConfigError("payload must be positive");
  if (!(edge_angle_deg > 0) || !(edge_angle_deg < 90)) throw ConfigError("edge angle must be in (0, 90)");
  if (flow_stagger < SimTime{0}) throw ConfigError("flow stagger must be non-negative");
  mac.validate();
  radio.validate();
  tcp.validate();
  if (tcp.data_bytes != payload) throw ConfigError("tcp data size must equal payload");
}

SimTime ScenarioConfig::max_propagation_delay() const {
  return propagation_delay(std::hypot(field_x, field_y));
}

Adjacency decode_adjacency(const std::vector<Position>& positions, const RadioParams& radio) {
  Adjacency adj(positions.size());
  for (NodeId a = 0; a < positions.size(); ++a) {
    for (NodeId b = 0; b < positions.size(); ++b) {
      if (a == b) continue;
      if (received_power(distance_m(positions[a], positions[b]), radio) >= radio.receive_threshold_w)
        adj[a].push_back(b);
    }
  }
  return adj;
}

Topology build_dumbbell(const ScenarioConfig& cfg) {
  cfg.validate();
  const std::uint32_t n = cfg.n_intermediate;
  const double s = cfg.node_spacing;
  const double angle = cfg.edge_angle_deg * std::numbers::pi / 180.0;
  const double dx = s * std::cos(angle);
  const double dy = s * std::sin(angle);
  const double y0 = std::max(cfg.field_y / 2.0, dy);
  const double x_first = 100.0 + dx;

  Topology t;
  t.positions.push_back({100.0, y0 + dy});
  t.positions.push_back({100.0, y0 - dy});
  t.names = {"L1", "L2"};
  for (std::uint32_t k = 0; k < n; ++k) {
    t.positions.push_back({x_first + k * s, y0});
    t.names.push_back("I" + std::to_string(k + 1));
  }
  const double x_last = x_first + (n - 1) * s;
  t.positions.push_back({x_last + dx, y0 + dy});
  t.positions.push_back({x_last + dx, y0 - dy});
  t.names.push_back("R1");
  t.names.push_back("R2");

  t.adjacency = decode_adjacency(t.positions, cfg.radio);

  const NodeId l1 = 0, l2 = 1, r1 = n + 2, r2 = n + 3;
  const std::pair<NodeId, NodeId> pairs[] = {{l1, r1}, {l1, r2}, {l2, r1}, {l2, r2}};
  for (std::uint32_t f = 0; f < cfg.n_flows; ++f) {
    t.flows.push_back(FlowSpec{f, pairs[f].first, pairs[f].second, f * cfg.flow_stagger});
  }
  return t;
}

Topology build_chain(std::size_t n, double spacing, std::vector<FlowSpec> flows,
                     const RadioParams& radio) {
  Topology t;
  for (std::size_t k = 0; k < n; ++k) {
    t.positions.push_back({100.0 + k * spacing, 100.0});
    t.names.push_back("N" + std::to_string(k));
  }
  t.adjacency = decode_adjacency(t.positions, radio);
  t.flows = std::move(flows);
  return t;
}

}  // namespace dcfsim
