#include "dcfsim/phy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dcfsim/mac_params.hpp"

namespace dcfsim {

void RadioParams::validate() const {
  if (!(bandwidth_bps > 0) || !(frequency_hz > 0) || !(tx_power_w > 0) ||
      !(carrier_sense_threshold_w > 0) || !(receive_threshold_w > 0) ||
      !(antenna_gain_tx > 0) || !(antenna_gain_rx > 0) || !(antenna_height_m > 0))
    throw ConfigError("radio powers, gains, heights and thresholds must be positive");
  if (!(receive_threshold_w > carrier_sense_threshold_w))
    throw ConfigError("receive threshold must exceed the carrier-sense threshold");
}

double RadioParams::wavelength_m() const { return kSpeedOfLight / frequency_hz; }

double RadioParams::crossover_distance_m() const {
  return 4.0 * std::numbers::pi * antenna_height_m * antenna_height_m / wavelength_m();
}

double RadioParams::capture_ratio() const { return std::pow(10.0, capture_threshold_db / 10.0); }

double distance_m(Position a, Position b) { return std::hypot(a.x_m - b.x_m, a.y_m - b.y_m); }

double received_power(double d_m, const RadioParams& p) {
  if (!(d_m > 0) || !std::isfinite(d_m)) throw InvalidGeometry("distance must be positive and finite");
  const double gain = p.tx_power_w * p.antenna_gain_tx * p.antenna_gain_rx;
  if (d_m < p.crossover_distance_m()) {
    const double lambda = p.wavelength_m();
    const double four_pi_d = 4.0 * std::numbers::pi * d_m;
    return gain * lambda * lambda / (four_pi_d * four_pi_d);
  }
  const double h2 = p.antenna_height_m * p.antenna_height_m;
  return gain * h2 * h2 / (d_m * d_m * d_m * d_m);
}

SimTime propagation_delay(double d_m) {
  return SimTime{static_cast<std::int64_t>(std::llround(d_m / kSpeedOfLight * 1e9))};
}

RxOutcome resolve_reception(double rx_power_w, double strongest_interferer_w,
                            bool overlapped_own_tx, const RadioParams& p) {
  if (rx_power_w < p.receive_threshold_w) return RxOutcome::BelowThreshold;
  if (overlapped_own_tx) return RxOutcome::CollisionDrop;
  if (strongest_interferer_w > 0 && rx_power_w < p.capture_ratio() * strongest_interferer_w)
    return RxOutcome::CollisionDrop;
  return RxOutcome::Decoded;
}

Channel::Channel(Simulator& sim, RadioParams params, std::vector<Position> positions)
    : sim_{sim},
      params_{params},
      positions_{std::move(positions)},
      n_{positions_.size()},
      power_(n_ * n_, 0.0),
      delay_(n_ * n_, SimTime{0}),
      nodes_(n_) {
  params_.validate();
  for (const auto& pos : positions_) {
    if (!std::isfinite(pos.x_m) || !std::isfinite(pos.y_m) || pos.x_m < 0 || pos.y_m < 0)
      throw InvalidGeometry("node positions must be finite and non-negative");
  }
  for (std::size_t a = 0; a < n_; ++a) {
    for (std::size_t b = 0; b < n_; ++b) {
      if (a == b) continue;
      const double d = distance_m(positions_[a], positions_[b]);
      power_[a * n_ + b] = received_power(d, params_);
      delay_[a * n_ + b] = propagation_delay(d);
    }
  }
}

void Channel::attach(NodeId node, PhyListener* listener) { nodes_.at(node).listener = listener; }

bool Channel::can_decode(NodeId from, NodeId to) const {
  return from != to && rx_power(from, to) >= params_.receive_threshold_w;
}

bool Channel::can_sense(NodeId from, NodeId to) const {
  return from != to && rx_power(from, to) >= params_.carrier_sense_threshold_w;
}

bool Channel::channel_busy(NodeId node) const {
  const auto& r = nodes_.at(node);
  return r.transmitting || !r.incoming.empty();
}

SimTime Channel::begin_transmission(NodeId tx, Frame frame, SimTime duration) {
  auto& radio = nodes_.at(tx);
  if (radio.transmitting) throw std::logic_error("node already transmitting");

  const bool was_busy = channel_busy(tx);
  auto air = std::make_shared<AirFrame>(AirFrame{next_air_id_++, std::move(frame), tx, sim_.now(),
                                                 sim_.now() + duration});
  radio.transmitting = true;
  for (auto& in : radio.incoming) in.own_tx_overlap = true;

  for (NodeId rx = 0; rx < n_; ++rx) {
    if (!can_sense(tx, rx)) continue;
    const double p = rx_power(tx, rx);
    const SimTime d = delay(tx, rx);
    sim_.schedule_at(air->start + d, [this, rx, air, p] { arrival_start(rx, air, p); });
    sim_.schedule_at(air->end + d, [this, rx, id = air->id] { arrival_end(rx, id); });
  }
  sim_.schedule_at(air->end, [this, tx, air] { transmission_end(tx, air); });

  if (!was_busy && radio.listener) radio.listener->on_channel_busy();
  return air->end;
}

void Channel::arrival_start(NodeId node, std::shared_ptr<const AirFrame> air, double power) {
  auto& radio = nodes_[node];
  const bool was_busy = channel_busy(node);
  Incoming in{std::move(air), power, 0.0, radio.transmitting};
  for (auto& other : radio.incoming) {
    other.strongest_interferer = std::max(other.strongest_interferer, power);
    in.strongest_interferer = std::max(in.strongest_interferer, other.power);
  }
  radio.incoming.push_back(std::move(in));
  if (!was_busy && radio.listener) radio.listener->on_channel_busy();
}

void Channel::arrival_end(NodeId node, std::uint64_t air_id) {
  auto& radio = nodes_[node];
  auto it = std::find_if(radio.incoming.begin(), radio.incoming.end(),
                         [air_id](const Incoming& in) { return in.air->id == air_id; });
  if (it == radio.incoming.end()) throw std::logic_error("arrival end without start");
  const Incoming in = std::move(*it);
  radio.incoming.erase(it);

  const RxOutcome outcome =
      resolve_reception(in.power, in.strongest_interferer, in.own_tx_overlap, params_);
  if (outcome != RxOutcome::BelowThreshold && radio.listener)
    radio.listener->on_rx_end(in.air->frame, outcome);
  if (!channel_busy(node) && radio.listener) radio.listener->on_channel_idle();
}

void Channel::transmission_end(NodeId node, std::shared_ptr<const AirFrame> air) {
  auto& radio = nodes_[node];
  radio.transmitting = false;
  if (radio.listener) {
    radio.listener->on_tx_end(air->frame);
    if (!channel_busy(node)) radio.listener->on_channel_idle();
  }
}

}  // namespace dcfsim
