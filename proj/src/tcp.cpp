#include "dcfsim/tcp.hpp"

#include <algorithm>
#include <cmath>

#include "dcfsim/mac_params.hpp"

namespace dcfsim {

void TcpParams::validate() const {
  if (max_window < 1) throw ConfigError("TCP max window must be at least 1 segment");
  if (initial_ssthresh < 2) throw ConfigError("TCP initial ssthresh must be at least 2");
  if (data_bytes < 1 || ack_bytes < 1) throw ConfigError("TCP segment sizes must be positive");
  if (!(min_rto_s > 0) || min_rto_s > max_rto_s || initial_rto_s < min_rto_s ||
      initial_rto_s > max_rto_s)
    throw ConfigError("TCP RTO bounds are inconsistent");
  if (dupack_threshold < 1) throw ConfigError("TCP dupack threshold must be at least 1");
}

// ---------------------------------------------------------------------------
// TcpState

TcpState::TcpState(const TcpParams& params)
    : params_{params}, ssthresh_{params.initial_ssthresh}, rto_s_{params.initial_rto_s} {}

std::uint32_t TcpState::window() const {
  return static_cast<std::uint32_t>(std::floor(std::min(cwnd_, double(params_.max_window))));
}

double TcpState::halved_ssthresh() const { return std::max(std::floor(cwnd_ / 2.0), 2.0); }

void TcpState::on_ack(std::int64_t ack_seq, std::optional<double> rtt_sample_s) {
  if (ack_seq <= highest_acked_) return;
  highest_acked_ = ack_seq;
  next_seq_ = std::max(next_seq_, highest_acked_ + 1);
  dupacks_ = 0;

  if (cwnd_ < ssthresh_) {
    cwnd_ += 1.0;
  } else {
    cwnd_ += 1.0 / cwnd_;
  }
  cwnd_ = std::min(cwnd_, double(params_.max_window));

  if (rtt_sample_s) {
    const double sample = *rtt_sample_s;
    if (!has_rtt_) {
      srtt_s_ = sample;
      rttvar_s_ = sample / 2.0;
      has_rtt_ = true;
    } else {
      rttvar_s_ = 0.75 * rttvar_s_ + 0.25 * std::abs(sample - srtt_s_);
      srtt_s_ = 0.875 * srtt_s_ + 0.125 * sample;
    }
    rto_s_ = std::clamp(srtt_s_ + 4.0 * rttvar_s_, params_.min_rto_s, params_.max_rto_s);
  }
}

bool TcpState::on_dupack() {
  ++dupacks_;
  if (dupacks_ != params_.dupack_threshold) return false;
  ssthresh_ = halved_ssthresh();
  cwnd_ = ssthresh_;
  return true;
}

void TcpState::on_timeout() {
  ssthresh_ = halved_ssthresh();
  cwnd_ = 1.0;
  rto_s_ = std::min(2.0 * rto_s_, params_.max_rto_s);
  dupacks_ = 0;
  next_seq_ = highest_acked_ + 1;
}

// ---------------------------------------------------------------------------
// TcpSender

TcpSender::TcpSender(Simulator& sim, const TcpParams& params, FlowId flow, NodeId src, NodeId dst,
                     Emit emit)
    : sim_{sim},
      params_{params},
      flow_{flow},
      src_{src},
      dst_{dst},
      emit_{std::move(emit)},
      state_{params} {
  params_.validate();
}

void TcpSender::start() {
  started_ = true;
  ftp_tick();
}

void TcpSender::ftp_tick() {
  if (!started_) return;
  while (state_.can_send()) emit_segment(state_.take_next_seq());
}

void TcpSender::emit_segment(std::int64_t seq) {
  const bool retx = seq <= max_seq_sent_;
  sent_[seq] = SendRecord{sim_.now(), retx};
  max_seq_sent_ = std::max(max_seq_sent_, seq);
  ++segments_sent_;
  if (retx) ++retransmissions_;

  Packet p;
  p.flow_id = flow_;
  p.kind = SegmentKind::Data;
  p.seq = seq;
  p.size_bytes = params_.data_bytes;
  p.origin = src_;
  p.destination = dst_;
  p.sent_at = sim_.now();
  if (!sim_.pending(timer_)) restart_timer();
  emit_(p);
}

void TcpSender::on_ack_packet(const Packet& ack) {
  const std::int64_t a = ack.seq;
  if (a > state_.highest_acked()) {
    std::optional<double> sample;
    if (auto it = sent_.find(a); it != sent_.end() && !it->second.retransmitted)
      sample = to_seconds(sim_.now() - it->second.sent_at);
    state_.on_ack(a, sample);
    sent_.erase(sent_.begin(), sent_.upper_bound(a));
    if (state_.in_flight() > 0) {
      restart_timer();
    } else {
      sim_.cancel(timer_);
    }
    notify_cwnd();
    ftp_tick();
  } else if (a == state_.highest_acked() && state_.in_flight() > 0) {
    if (state_.on_dupack()) {
      emit_segment(state_.highest_acked() + 1);
      restart_timer();
    }
    notify_cwnd();
    ftp_tick();
  }
}

void TcpSender::restart_timer() {
  sim_.cancel(timer_);
  timer_ = sim_.schedule_in(from_seconds(state_.rto_s()), [this] { on_timer(); });
}

void TcpSender::on_timer() {
  timer_ = EventHandle{};
  if (state_.in_flight() <= 0) return;
  ++timeouts_;
  state_.on_timeout();
  notify_cwnd();
  ftp_tick();
  restart_timer();
}

void TcpSender::notify_cwnd() {
  if (cwnd_observer_) cwnd_observer_(state_.cwnd());
}

// ---------------------------------------------------------------------------
// TcpReceiver

TcpReceiver::TcpReceiver(const TcpParams& params, FlowId flow, NodeId self, NodeId peer, Emit emit)
    : params_{params}, flow_{flow}, self_{self}, peer_{peer}, emit_{std::move(emit)} {}

std::int64_t TcpReceiver::on_receive_data(const Packet& segment) {
  if (segment.seq == next_expected_) {
    ++next_expected_;
    ++unique_delivered_;
    while (!out_of_order_.empty() && *out_of_order_.begin() == next_expected_) {
      out_of_order_.erase(out_of_order_.begin());
      ++next_expected_;
      ++unique_delivered_;
    }
  } else if (segment.seq > next_expected_) {
    out_of_order_.insert(segment.seq);
  }

  Packet ack;
  ack.flow_id = flow_;
  ack.kind = SegmentKind::Ack;
  ack.seq = next_expected_ - 1;
  ack.size_bytes = params_.ack_bytes;
  ack.origin = self_;
  ack.destination = peer_;
  ack.sent_at = segment.sent_at;
  emit_(ack);
  return ack.seq;
}

}  // namespace dcfsim
