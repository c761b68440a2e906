#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "dcfsim/packet.hpp"
#include "dcfsim/simulator.hpp"

namespace dcfsim {

struct TcpParams {
  std::uint32_t max_window = 20;  // segments
  double initial_ssthresh = 20;   // segments
  std::uint32_t data_bytes = 1500;
  std::uint32_t ack_bytes = 40;
  double initial_rto_s = 1.0;
  double min_rto_s = 0.2;
  double max_rto_s = 60.0;
  std::uint32_t dupack_threshold = 3;

  void validate() const;
};

/// Reno congestion state of one sender, with no fast-recovery window
/// inflation. Sequence numbers count segments from 0; an ACK carries the
/// highest in-order segment the receiver holds.
class TcpState {
 public:
  explicit TcpState(const TcpParams& params);

  double cwnd() const { return cwnd_; }
  double ssthresh() const { return ssthresh_; }
  double rto_s() const { return rto_s_; }
  std::optional<double> srtt_s() const { return has_rtt_ ? std::optional{srtt_s_} : std::nullopt; }
  double rttvar_s() const { return rttvar_s_; }
  std::int64_t next_seq() const { return next_seq_; }
  std::int64_t highest_acked() const { return highest_acked_; }
  std::uint32_t dupack_count() const { return dupacks_; }

  /// Usable window: floor(min(cwnd, max_window)).
  std::uint32_t window() const;
  std::int64_t in_flight() const { return next_seq_ - (highest_acked_ + 1); }
  bool can_send() const { return in_flight() < static_cast<std::int64_t>(window()); }

  /// Claims the next sequence number to send.
  std::int64_t take_next_seq() { return next_seq_++; }

  /// New cumulative ACK. `rtt_sample_s` is absent when the acked segment was
  /// retransmitted.
  void on_ack(std::int64_t ack_seq, std::optional<double> rtt_sample_s);
  /// Returns true when this duplicate triggers fast retransmit.
  bool on_dupack();
  /// Retransmission timer expiry: halve into ssthresh, collapse cwnd, back
  /// off the RTO, and rewind to the earliest unacknowledged segment.
  void on_timeout();

  /// Test hooks for seeding a specific state.
  void set_cwnd(double c) { cwnd_ = c; }
  void set_ssthresh(double s) { ssthresh_ = s; }
  void set_rto(double r) { rto_s_ = r; }
  void set_dupacks(std::uint32_t d) { dupacks_ = d; }

 private:
  double halved_ssthresh() const;

  TcpParams params_;
  double cwnd_ = 1.0;
  double ssthresh_;
  std::int64_t next_seq_ = 0;
  std::int64_t highest_acked_ = -1;
  std::uint32_t dupacks_ = 0;
  bool has_rtt_ = false;
  double srtt_s_ = 0.0;
  double rttvar_s_ = 0.0;
  double rto_s_;
};

/// FTP source over a TCP sender: always has data, keeps the window full.
class TcpSender {
 public:
  using Emit = std::function<void(const Packet&)>;

  TcpSender(Simulator& sim, const TcpParams& params, FlowId flow, NodeId src, NodeId dst, Emit emit);
  TcpSender(const TcpSender&) = delete;
  TcpSender& operator=(const TcpSender&) = delete;

  void start();
  /// Emits segments while the window allows.
  void ftp_tick();
  void on_ack_packet(const Packet& ack);

  const TcpState& state() const { return state_; }
  TcpState& mutable_state() { return state_; }
  FlowId flow() const { return flow_; }
  NodeId src() const { return src_; }
  NodeId dst() const { return dst_; }
  bool started() const { return started_; }

  std::uint64_t segments_sent() const { return segments_sent_; }
  std::uint64_t retransmissions() const { return retransmissions_; }
  std::uint64_t timeouts() const { return timeouts_; }

  /// Called with cwnd after every change caused by an ACK, dupack or timeout.
  void set_cwnd_observer(std::function<void(double)> obs) { cwnd_observer_ = std::move(obs); }

 private:
  void emit_segment(std::int64_t seq);
  void restart_timer();
  void on_timer();
  void notify_cwnd();

  Simulator& sim_;
  TcpParams params_;
  FlowId flow_;
  NodeId src_;
  NodeId dst_;
  Emit emit_;
  TcpState state_;
  bool started_ = false;
  EventHandle timer_;

  struct SendRecord {
    SimTime sent_at;
    bool retransmitted;
  };
  std::map<std::int64_t, SendRecord> sent_;
  std::int64_t max_seq_sent_ = -1;

  std::uint64_t segments_sent_ = 0;
  std::uint64_t retransmissions_ = 0;
  std::uint64_t timeouts_ = 0;
  std::function<void(double)> cwnd_observer_;
};

/// Cumulative-ACK receiver with out-of-order buffering and immediate ACKs.
class TcpReceiver {
 public:
  using Emit = std::function<void(const Packet&)>;

  TcpReceiver(const TcpParams& params, FlowId flow, NodeId self, NodeId peer, Emit emit);

  /// Returns the ACK number sent in response.
  std::int64_t on_receive_data(const Packet& segment);

  std::int64_t highest_in_order() const { return next_expected_ - 1; }
  std::uint64_t unique_delivered() const { return unique_delivered_; }

 private:
  TcpParams params_;
  FlowId flow_;
  NodeId self_;
  NodeId peer_;
  Emit emit_;
  std::int64_t next_expected_ = 0;
  std::set<std::int64_t> out_of_order_;
  std::uint64_t unique_delivered_ = 0;
};

}  // namespace dcfsim
