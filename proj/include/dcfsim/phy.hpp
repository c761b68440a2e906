#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "dcfsim/frame.hpp"
#include "dcfsim/simulator.hpp"

namespace dcfsim {

/// Radio parameters approximating the WaveLAN DSSS card. Thresholds are
/// linear watts.
struct RadioParams {
  double bandwidth_bps = 2e6;
  double frequency_hz = 914e6;
  double capture_threshold_db = 10.0;
  double carrier_sense_threshold_w = 1.559e-11;
  double receive_threshold_w = 3.562e-10;
  double tx_power_w = 0.2818;
  double antenna_gain_tx = 1.0;
  double antenna_gain_rx = 1.0;
  double antenna_height_m = 1.5;

  void validate() const;

  double wavelength_m() const;
  /// Distance where the free-space and two-ray ground curves meet.
  double crossover_distance_m() const;
  /// Capture threshold as a linear power ratio.
  double capture_ratio() const;
};

inline constexpr double kSpeedOfLight = 299'792'458.0;

struct Position {
  double x_m = 0.0;
  double y_m = 0.0;
};

double distance_m(Position a, Position b);

class InvalidGeometry : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Friis free-space below the crossover distance, two-ray ground beyond it.
double received_power(double d_m, const RadioParams& p);

/// Propagation delay rounded to the nearest nanosecond.
SimTime propagation_delay(double d_m);

enum class RxOutcome : std::uint8_t { Decoded, CollisionDrop, BelowThreshold };

/// Reception verdict for one frame at one receiver, given the strongest
/// frame that overlapped it in time (0 if none) and whether the receiver
/// transmitted at any point during it.
RxOutcome resolve_reception(double rx_power_w, double strongest_interferer_w,
                            bool overlapped_own_tx, const RadioParams& p);

struct AirFrame {
  std::uint64_t id = 0;
  Frame frame;
  NodeId tx_node = 0;
  SimTime start{0};
  SimTime end{0};
};

/// Callbacks from the channel into a node's MAC.
class PhyListener {
 public:
  virtual ~PhyListener() = default;
  virtual void on_channel_busy() = 0;
  virtual void on_channel_idle() = 0;
  virtual void on_tx_end(const Frame& frame) = 0;
  /// Called at the end of every frame that arrived at or above the receive
  /// threshold, whether or not it survived.
  virtual void on_rx_end(const Frame& frame, RxOutcome outcome) = 0;
};

/// The shared medium. Node positions are fixed at construction; received
/// powers and delays are precomputed for every ordered pair.
class Channel {
 public:
  Channel(Simulator& sim, RadioParams params, std::vector<Position> positions);

  void attach(NodeId node, PhyListener* listener);

  /// Puts `frame` on the air from `tx` for `duration`. Returns the end time.
  SimTime begin_transmission(NodeId tx, Frame frame, SimTime duration);

  /// Physical carrier sense: own transmission or any arriving frame at or
  /// above the carrier-sense threshold.
  bool channel_busy(NodeId node) const;
  bool transmitting(NodeId node) const { return nodes_.at(node).transmitting; }

  double rx_power(NodeId from, NodeId to) const { return power_[from * n_ + to]; }
  SimTime delay(NodeId from, NodeId to) const { return delay_[from * n_ + to]; }
  bool can_decode(NodeId from, NodeId to) const;
  bool can_sense(NodeId from, NodeId to) const;

  std::size_t node_count() const { return n_; }
  const RadioParams& params() const { return params_; }
  const std::vector<Position>& positions() const { return positions_; }

  std::uint64_t frames_sent() const { return next_air_id_ - 1; }

 private:
  struct Incoming {
    std::shared_ptr<const AirFrame> air;
    double power = 0.0;
    double strongest_interferer = 0.0;
    bool own_tx_overlap = false;
  };
  struct NodeRadio {
    std::vector<Incoming> incoming;
    bool transmitting = false;
    PhyListener* listener = nullptr;
  };

  void arrival_start(NodeId node, std::shared_ptr<const AirFrame> air, double power);
  void arrival_end(NodeId node, std::uint64_t air_id);
  void transmission_end(NodeId node, std::shared_ptr<const AirFrame> air);

  Simulator& sim_;
  RadioParams params_;
  std::vector<Position> positions_;
  std::size_t n_;
  std::vector<double> power_;
  std::vector<SimTime> delay_;
  std::vector<NodeRadio> nodes_;
  std::uint64_t next_air_id_ = 1;
};

}  // namespace dcfsim
