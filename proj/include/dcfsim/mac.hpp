#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <iosfwd>
#include <string_view>
#include <unordered_map>

#include "dcfsim/frame.hpp"
#include "dcfsim/mac_params.hpp"
#include "dcfsim/phy.hpp"
#include "dcfsim/simulator.hpp"

namespace dcfsim {

enum class MacStateKind : std::uint8_t {
  Idle,
  WaitDifs,
  BackoffCounting,
  BackoffFrozen,
  WaitCts,
  WaitAck,
  Transmitting,
  DeferNav,
};

std::string_view to_string(MacStateKind s);

/// Which stage of the exchange went unanswered.
enum class TxFailure : std::uint8_t { Rts, Data };

enum class DropReason : std::uint8_t { Collision, RetryLimitExceeded, QueueOverflow, NoRoute };

std::string_view to_string(DropReason r);

/// Contention window and per-packet retry counters. The window moves along
/// cw_min, 2*cw_min+1, ... capped at cw_max; short_retry counts RTS-stage
/// failures and long_retry counts DATA-stage failures.
class RetryState {
 public:
  enum class Verdict : std::uint8_t { Retry, Discard };

  explicit RetryState(const MacParams& params)
      : cw_min_{params.cw_min},
        cw_max_{params.cw_max},
        short_limit_{params.short_retry_limit},
        long_limit_{params.long_retry_limit},
        cw_{params.cw_min} {}

  std::uint32_t cw() const { return cw_; }
  std::uint32_t short_retry() const { return short_retry_; }
  std::uint32_t long_retry() const { return long_retry_; }

  void on_success();
  /// Widens the window and bumps the counter for `stage`. On Discard the
  /// window and counters are already reset for the next packet.
  Verdict on_failure(TxFailure stage);

 private:
  void reset();

  std::uint32_t cw_min_;
  std::uint32_t cw_max_;
  std::uint32_t short_limit_;
  std::uint32_t long_limit_;
  std::uint32_t cw_;
  std::uint32_t short_retry_ = 0;
  std::uint32_t long_retry_ = 0;
};

struct BackoffDraw {
  std::uint32_t slots = 0;
  SimTime duration{0};
};

/// Random slot count uniform over [0, cw], and its duration.
BackoffDraw draw_backoff(std::uint32_t cw, SimTime slot_time, Rng& rng);

/// Upcalls from a node's MAC.
struct MacHooks {
  /// A new (non-duplicate) DATA frame addressed to this node was decoded.
  std::function<void(const Packet&, NodeId from)> deliver;
  /// The head packet was acknowledged by the next hop.
  std::function<void(const Packet&, NodeId next_hop)> hop_success;
  /// The head packet was discarded after exhausting a retry limit.
  std::function<void(const Packet&, NodeId next_hop, TxFailure last_stage)> retry_exhausted;
  /// A DATA frame addressed to this node was destroyed by overlap.
  std::function<void(const Packet&, NodeId from)> data_collision;
  /// A DATA frame carrying this packet is about to go on air.
  std::function<void(const Packet&)> data_attempt;
};

/// One node's IEEE 802.11 DCF entity: physical and virtual carrier sense,
/// slotted backoff with freeze/resume, RTS/CTS/DATA/ACK exchange, and retry
/// accounting. Driven entirely by engine events and channel callbacks.
class DcfMac : public PhyListener {
 public:
  enum class EnqueueResult : std::uint8_t { Accepted, Dropped };

  DcfMac(Simulator& sim, Channel& channel, NodeId id, MacParams params, SimTime max_prop_delay,
         MacHooks hooks = {});

  DcfMac(const DcfMac&) = delete;
  DcfMac& operator=(const DcfMac&) = delete;

  EnqueueResult enqueue(const Packet& packet, NodeId next_hop);

  /// Optional per-event log; one line per MAC event.
  void set_trace(std::ostream* out) { trace_ = out; }

  NodeId id() const { return id_; }
  MacStateKind state() const;
  std::uint32_t cw() const { return retry_.cw(); }
  std::uint32_t short_retry() const { return retry_.short_retry(); }
  std::uint32_t long_retry() const { return retry_.long_retry(); }
  bool backoff_pending() const { return backoff_pending_; }
  std::uint32_t backoff_slots() const { return backoff_slots_; }
  SimTime nav_until() const { return nav_until_; }
  std::size_t queue_size() const { return queue_.size(); }
  const MacParams& params() const { return params_; }

  template <typename F>
  void for_each_queued(F&& f) const {
    for (const auto& o : queue_) f(o.packet);
  }

  struct Counters {
    std::uint64_t rts_sent = 0;
    std::uint64_t data_sent = 0;
    std::uint64_t cts_timeouts = 0;
    std::uint64_t ack_timeouts = 0;
    std::uint64_t collisions_seen = 0;
    std::uint64_t duplicates = 0;
  };
  const Counters& counters() const { return counters_; }

  SimTime rts_duration() const;
  SimTime cts_duration() const;
  SimTime ack_duration() const;
  SimTime data_duration(std::uint32_t payload_bytes) const;

  // PhyListener
  void on_channel_busy() override;
  void on_channel_idle() override;
  void on_tx_end(const Frame& frame) override;
  void on_rx_end(const Frame& frame, RxOutcome outcome) override;

 private:
  enum class Phase : std::uint8_t { None, TxRts, WaitCts, TxData, WaitAck };

  struct Outbound {
    Packet packet;
    NodeId next_hop;
    std::uint64_t mac_seq;
  };

  bool wants_access() const;
  bool medium_busy() const;
  SimTime idle_reference() const;
  void reschedule_access();
  void freeze_countdown();
  void start_backoff();
  void on_access_granted();

  void start_exchange();
  void send_rts();
  void send_data();
  void send_response(Frame frame);
  void on_timeout(TxFailure stage);
  void finish_success();
  void finish_failure(TxFailure stage);
  void set_nav(SimTime until);

  void trace(std::string_view event, std::string_view kind, std::string_view detail = {}) const;

  Simulator& sim_;
  Channel& channel_;
  NodeId id_;
  MacParams params_;
  SimTime max_prop_;
  MacHooks hooks_;
  std::ostream* trace_ = nullptr;

  std::deque<Outbound> queue_;
  RetryState retry_;
  std::uint64_t next_mac_seq_ = 1;
  std::unordered_map<NodeId, std::uint64_t> last_seq_from_;

  bool backoff_pending_ = false;
  std::uint32_t backoff_slots_ = 0;
  SimTime countdown_start_{0};
  EventHandle access_event_;

  SimTime phys_idle_since_{0};
  SimTime nav_until_{0};
  SimTime exchange_end_{0};
  EventHandle nav_event_;

  Phase phase_ = Phase::None;
  EventHandle timeout_event_;
  EventHandle data_event_;
  bool responding_ = false;

  Counters counters_;
};

}  // namespace dcfsim
