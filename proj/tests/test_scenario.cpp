#include <doctest.h>

#include <algorithm>

#include "dcfsim/scenario.hpp"

using namespace dcfsim;
using namespace std::chrono_literals;

namespace {

bool linked(const Topology& t, NodeId a, NodeId b) {
  const auto& n = t.adjacency[a];
  return std::find(n.begin(), n.end(), b) != n.end();
}

}  // namespace

TEST_SUITE("scenario") {
  TEST_CASE("node counts") {
    for (auto [n, nodes] : {std::pair{6u, 10u}, {8u, 12u}, {10u, 14u}}) {
      ScenarioConfig cfg;
      cfg.n_intermediate = n;
      const Topology t = build_dumbbell(cfg);
      CHECK(t.node_count() == nodes);
      CHECK(t.flows.size() == 4);
    }
  }

  TEST_CASE("other intermediate counts need the override") {
    ScenarioConfig cfg;
    cfg.n_intermediate = 7;
    CHECK_THROWS_AS(build_dumbbell(cfg), ConfigError);
    cfg.allow_any_n = true;
    CHECK(build_dumbbell(cfg).node_count() == 11);
  }

  TEST_CASE("edge nodes sit one spacing from the chain ends") {
    ScenarioConfig cfg;
    const Topology t = build_dumbbell(cfg);
    const NodeId i1 = 2, in = 7, r1 = 8, r2 = 9;
    CHECK(distance_m(t.positions[0], t.positions[i1]) == doctest::Approx(200.0));
    CHECK(distance_m(t.positions[1], t.positions[i1]) == doctest::Approx(200.0));
    CHECK(distance_m(t.positions[r1], t.positions[in]) == doctest::Approx(200.0));
    CHECK(distance_m(t.positions[r2], t.positions[in]) == doctest::Approx(200.0));
    for (NodeId k = i1; k < in; ++k)
      CHECK(distance_m(t.positions[k], t.positions[k + 1]) == doctest::Approx(200.0));
    for (const auto& p : t.positions) {
      CHECK(p.x_m >= 0);
      CHECK(p.x_m <= cfg.field_x);
      CHECK(p.y_m >= 0);
      CHECK(p.y_m <= cfg.field_y);
    }
  }

  TEST_CASE("neighbourhoods follow decode range") {
    ScenarioConfig cfg;
    const Topology t = build_dumbbell(cfg);
    const RadioParams& r = cfg.radio;
    for (NodeId a = 0; a < t.node_count(); ++a) {
      for (NodeId b = 0; b < t.node_count(); ++b) {
        if (a == b) continue;
        const bool in_range =
            received_power(distance_m(t.positions[a], t.positions[b]), r) >= r.receive_threshold_w;
        CHECK(linked(t, a, b) == in_range);
      }
    }
    CHECK(linked(t, 0, 1));
    CHECK(linked(t, 0, 2));
    CHECK(t.adjacency[0].size() == 2);
    CHECK(linked(t, 2, 3));
    CHECK_FALSE(linked(t, 2, 4));
  }

  TEST_CASE("flows and start times") {
    ScenarioConfig cfg;
    const Topology t = build_dumbbell(cfg);
    REQUIRE(t.flows.size() == 4);
    const NodeId r1 = 8, r2 = 9;
    CHECK(t.flows[0].src == 0);
    CHECK(t.flows[0].dst == r1);
    CHECK(t.flows[1].src == 0);
    CHECK(t.flows[1].dst == r2);
    CHECK(t.flows[2].src == 1);
    CHECK(t.flows[2].dst == r1);
    CHECK(t.flows[3].src == 1);
    CHECK(t.flows[3].dst == r2);
    for (std::size_t f = 0; f < 4; ++f) CHECK(t.flows[f].start_time == SimTime{std::chrono::seconds(f)});
    cfg.n_flows = 2;
    CHECK(build_dumbbell(cfg).flows.size() == 2);
  }

  TEST_CASE("validation") {
    ScenarioConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.payload = 1000;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = ScenarioConfig{};
    cfg.n_flows = 5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = ScenarioConfig{};
    cfg.duration = -1s;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }

  TEST_CASE("largest propagation delay spans the field diagonal") {
    ScenarioConfig cfg;
    CHECK(cfg.max_propagation_delay() == SimTime{6408});
  }
}
