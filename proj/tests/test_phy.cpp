#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "dcfsim/frame.hpp"
#include "dcfsim/phy.hpp"

using namespace dcfsim;
using namespace std::chrono_literals;

namespace {

// Reference propagation formulas written out independently of the library.
double friis(double d, const RadioParams& p) {
  const double lambda = 299'792'458.0 / p.frequency_hz;
  return p.tx_power_w * p.antenna_gain_tx * p.antenna_gain_rx * lambda * lambda /
         std::pow(4 * std::numbers::pi * d, 2);
}
double two_ray(double d, const RadioParams& p) {
  return p.tx_power_w * p.antenna_gain_tx * p.antenna_gain_rx *
         std::pow(p.antenna_height_m, 4) / std::pow(d, 4);
}
double reference_power(double d, const RadioParams& p) {
  const double lambda = 299'792'458.0 / p.frequency_hz;
  const double dc = 4 * std::numbers::pi * p.antenna_height_m * p.antenna_height_m / lambda;
  return d < dc ? friis(d, p) : two_ray(d, p);
}
// Largest distance whose reference power still reaches `threshold`.
double range_for(double threshold, const RadioParams& p) {
  double lo = 1.0, hi = 5000.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (reference_power(mid, p) >= threshold ? lo : hi) = mid;
  }
  return lo;
}

struct Recorder : PhyListener {
  std::vector<std::pair<FrameKind, RxOutcome>> rx;
  int busy = 0, idle = 0, tx_end = 0;
  void on_channel_busy() override { ++busy; }
  void on_channel_idle() override { ++idle; }
  void on_tx_end(const Frame&) override { ++tx_end; }
  void on_rx_end(const Frame& f, RxOutcome o) override { rx.emplace_back(f.kind, o); }
};

Frame frame_from(NodeId src, FrameKind kind = FrameKind::Data) {
  Frame f;
  f.kind = kind;
  f.src = src;
  f.dst = 99;
  return f;
}

}  // namespace

TEST_SUITE("phy") {
  TEST_CASE("received power matches the reference formulas") {
    RadioParams p;
    for (double d : {1.0, 10.0, 50.0, 85.0, 90.0, 200.0, 251.0, 400.0, 550.0, 1500.0})
      CHECK(received_power(d, p) == doctest::Approx(reference_power(d, p)).epsilon(1e-12));
  }

  TEST_CASE("adjacent nodes decode, two hops do not") {
    RadioParams p;
    CHECK(received_power(200, p) >= p.receive_threshold_w);
    CHECK(received_power(400, p) < p.receive_threshold_w);
    CHECK(received_power(400, p) >= p.carrier_sense_threshold_w);
    CHECK(received_power(200, p) > received_power(400, p));
  }

  TEST_CASE("decode and carrier-sense ranges") {
    RadioParams p;
    const double decode = range_for(p.receive_threshold_w, p);
    const double sense = range_for(p.carrier_sense_threshold_w, p);
    CHECK(decode == doctest::Approx(251.6).epsilon(0.002));
    CHECK(sense == doctest::Approx(550.0).epsilon(0.002));
    CHECK(received_power(decode * 0.999, p) >= p.receive_threshold_w);
    CHECK(received_power(decode * 1.001, p) < p.receive_threshold_w);
  }

  TEST_CASE("free-space and two-ray agree at the crossover") {
    RadioParams p;
    const double dc = p.crossover_distance_m();
    CHECK(dc == doctest::Approx(86.1).epsilon(0.002));
    CHECK(std::abs(friis(dc, p) - two_ray(dc, p)) / two_ray(dc, p) < 1e-9);
    CHECK(std::abs(received_power(dc, p) - friis(dc, p)) / friis(dc, p) < 1e-9);
  }

  TEST_CASE("power decreases with distance") {
    RadioParams p;
    double last = received_power(0.5, p);
    for (double d = 1.0; d < 2000.0; d += 0.5) {
      const double now = received_power(d, p);
      REQUIRE(now < last);
      last = now;
    }
  }

  TEST_CASE("non-positive distance is invalid geometry") {
    RadioParams p;
    CHECK_THROWS_AS(received_power(0.0, p), InvalidGeometry);
    CHECK_THROWS_AS(received_power(-3.0, p), InvalidGeometry);
  }

  TEST_CASE("propagation delay rounds to whole nanoseconds") {
    CHECK(propagation_delay(200.0) == SimTime{667});
    CHECK(propagation_delay(0.1) == SimTime{0});
  }

  TEST_CASE("reception verdicts") {
    RadioParams p;
    const double rx = p.receive_threshold_w;
    CHECK(resolve_reception(2 * rx, 0.0, false, p) == RxOutcome::Decoded);
    CHECK(resolve_reception(0.5 * rx, 0.0, false, p) == RxOutcome::BelowThreshold);
    CHECK(resolve_reception(2 * rx, 2 * rx, false, p) == RxOutcome::CollisionDrop);
    CHECK(resolve_reception(100 * rx, rx, false, p) == RxOutcome::Decoded);
    CHECK(resolve_reception(rx, 100 * rx, false, p) == RxOutcome::CollisionDrop);
    CHECK(resolve_reception(10 * rx, rx, false, p) == RxOutcome::Decoded);
    CHECK(resolve_reception(9.99 * rx, rx, false, p) == RxOutcome::CollisionDrop);
    CHECK(resolve_reception(2 * rx, 0.0, true, p) == RxOutcome::CollisionDrop);
  }

  TEST_CASE("idle channel, own transmission and a neighbour's transmission") {
    Simulator sim;
    Channel ch(sim, RadioParams{}, {{0, 0}, {200, 0}});
    Recorder a, b;
    ch.attach(0, &a);
    ch.attach(1, &b);
    CHECK_FALSE(ch.channel_busy(0));
    CHECK_FALSE(ch.channel_busy(1));
    ch.begin_transmission(0, frame_from(0), 1ms);
    CHECK(ch.channel_busy(0));
    CHECK(ch.transmitting(0));
    CHECK_THROWS(ch.begin_transmission(0, frame_from(0), 1ms));
    sim.run_until(SimTime{667});
    CHECK(ch.channel_busy(1));
    sim.run_until(2ms);
    CHECK_FALSE(ch.channel_busy(0));
    CHECK_FALSE(ch.channel_busy(1));
    REQUIRE(b.rx.size() == 1);
    CHECK(b.rx[0].second == RxOutcome::Decoded);
    CHECK(a.tx_end == 1);
    CHECK(b.busy == 1);
    CHECK(b.idle == 1);
  }

  TEST_CASE("equal-power overlap destroys both frames") {
    Simulator sim;
    Channel ch(sim, RadioParams{}, {{0, 0}, {200, 0}, {400, 0}});
    Recorder r0, r1, r2;
    ch.attach(0, &r0);
    ch.attach(1, &r1);
    ch.attach(2, &r2);
    ch.begin_transmission(0, frame_from(0), 1ms);
    sim.run_until(100us);
    ch.begin_transmission(2, frame_from(2), 1ms);
    sim.run_until(5ms);
    REQUIRE(r1.rx.size() == 2);
    CHECK(r1.rx[0].second == RxOutcome::CollisionDrop);
    CHECK(r1.rx[1].second == RxOutcome::CollisionDrop);
    // 400 m apart: each senses the other but cannot decode it.
    CHECK(r0.rx.empty());
    CHECK(r2.rx.empty());
  }

  TEST_CASE("a 20 dB stronger frame captures") {
    Simulator sim;
    // Receiver at 1; sender 0 at 50 m, interferer 2 at 250 m.
    Channel ch(sim, RadioParams{}, {{250, 0}, {300, 0}, {550, 0}});
    REQUIRE(ch.rx_power(0, 1) / ch.rx_power(2, 1) >= 100.0);
    Recorder r0, r1, r2;
    ch.attach(0, &r0);
    ch.attach(1, &r1);
    ch.attach(2, &r2);
    ch.begin_transmission(2, frame_from(2, FrameKind::Rts), 1ms);
    ch.begin_transmission(0, frame_from(0, FrameKind::Cts), 1ms);
    sim.run_until(5ms);
    REQUIRE(r1.rx.size() == 2);
    for (auto [kind, outcome] : r1.rx) {
      CHECK(outcome == (kind == FrameKind::Cts ? RxOutcome::Decoded : RxOutcome::CollisionDrop));
    }
  }

  TEST_CASE("frame airtimes") {
    const SimTime plcp = 192us;
    CHECK(airtime(20, 2e6, plcp) == SimTime{272us});
    CHECK(airtime(14, 2e6, plcp) == SimTime{248us});
    CHECK(airtime(1534, 2e6, plcp) == SimTime{6328us});
    CHECK(airtime(74, 2e6, plcp) == SimTime{488us});
  }
}
