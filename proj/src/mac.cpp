#include "dcfsim/mac.hpp"

#include <algorithm>
#include <ostream>

#include <fmt/format.h>

namespace dcfsim {

void MacParams::validate() const {
  if (!is_window_value(cw_min) || !is_window_value(cw_max))
    throw ConfigError("cw_min and cw_max must be of the form 2^k - 1");
  if (cw_min > cw_max) throw ConfigError("cw_min must not exceed cw_max");
  if (short_retry_limit < 1 || long_retry_limit < 1)
    throw ConfigError("retry limits must be at least 1");
  if (slot_time <= SimTime{0} || sifs <= SimTime{0})
    throw ConfigError("slot time and SIFS must be positive");
  if (difs != sifs + 2 * slot_time) throw ConfigError("DIFS must equal SIFS + 2 slot times");
  if (queue_capacity < 1) throw ConfigError("queue capacity must be at least 1");
  if (plcp_overhead < SimTime{0}) throw ConfigError("PLCP overhead must be non-negative");
}

std::string_view to_string(MacStateKind s) {
  switch (s) {
    case MacStateKind::Idle: return "IDLE";
    case MacStateKind::WaitDifs: return "WAIT_DIFS";
    case MacStateKind::BackoffCounting: return "BACKOFF_COUNTING";
    case MacStateKind::BackoffFrozen: return "BACKOFF_FROZEN";
    case MacStateKind::WaitCts: return "WAIT_CTS";
    case MacStateKind::WaitAck: return "WAIT_ACK";
    case MacStateKind::Transmitting: return "TRANSMITTING";
    case MacStateKind::DeferNav: return "DEFER_NAV";
  }
  return "?";
}

std::string_view to_string(DropReason r) {
  switch (r) {
    case DropReason::Collision: return "COL";
    case DropReason::RetryLimitExceeded: return "RET";
    case DropReason::QueueOverflow: return "IFQ";
    case DropReason::NoRoute: return "NRTE";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// RetryState

void RetryState::reset() {
  cw_ = cw_min_;
  short_retry_ = 0;
  long_retry_ = 0;
}

void RetryState::on_success() { reset(); }

RetryState::Verdict RetryState::on_failure(TxFailure stage) {
  cw_ = std::min(2 * cw_ + 1, cw_max_);
  const bool exhausted = stage == TxFailure::Rts ? ++short_retry_ >= short_limit_
                                                 : ++long_retry_ >= long_limit_;
  if (exhausted) {
    reset();
    return Verdict::Discard;
  }
  return Verdict::Retry;
}

BackoffDraw draw_backoff(std::uint32_t cw, SimTime slot_time, Rng& rng) {
  const auto slots = static_cast<std::uint32_t>(rng.uniform_int(cw));
  return {slots, slots * slot_time};
}

// ---------------------------------------------------------------------------
// DcfMac

DcfMac::DcfMac(Simulator& sim, Channel& channel, NodeId id, MacParams params,
               SimTime max_prop_delay, MacHooks hooks)
    : sim_{sim},
      channel_{channel},
      id_{id},
      params_{params},
      max_prop_{max_prop_delay},
      hooks_{std::move(hooks)},
      retry_{params} {
  params_.validate();
  channel_.attach(id_, this);
}

SimTime DcfMac::rts_duration() const {
  return airtime(mac_overhead_bytes(FrameKind::Rts), channel_.params().bandwidth_bps,
                 params_.plcp_overhead);
}
SimTime DcfMac::cts_duration() const {
  return airtime(mac_overhead_bytes(FrameKind::Cts), channel_.params().bandwidth_bps,
                 params_.plcp_overhead);
}
SimTime DcfMac::ack_duration() const {
  return airtime(mac_overhead_bytes(FrameKind::Ack), channel_.params().bandwidth_bps,
                 params_.plcp_overhead);
}
SimTime DcfMac::data_duration(std::uint32_t payload_bytes) const {
  return airtime(mac_overhead_bytes(FrameKind::Data) + payload_bytes,
                 channel_.params().bandwidth_bps, params_.plcp_overhead);
}

DcfMac::EnqueueResult DcfMac::enqueue(const Packet& packet, NodeId next_hop) {
  if (queue_.size() >= params_.queue_capacity) {
    trace("DROP", "DATA", fmt::format("IFQ copy={}", packet.copy_id));
    return EnqueueResult::Dropped;
  }
  queue_.push_back(Outbound{packet, next_hop, next_mac_seq_++});
  trace("ENQ", "-", fmt::format("copy={} q={}", packet.copy_id, queue_.size()));
  if (queue_.size() == 1) reschedule_access();
  return EnqueueResult::Accepted;
}

MacStateKind DcfMac::state() const {
  if (channel_.transmitting(id_)) return MacStateKind::Transmitting;
  switch (phase_) {
    case Phase::WaitCts: return MacStateKind::WaitCts;
    case Phase::WaitAck:
    case Phase::TxData: return MacStateKind::WaitAck;
    case Phase::TxRts: return MacStateKind::Transmitting;
    case Phase::None: break;
  }
  if (queue_.empty() && !backoff_pending_) return MacStateKind::Idle;
  if (nav_until_ > sim_.now()) return MacStateKind::DeferNav;
  if (sim_.pending(access_event_)) {
    if (sim_.now() < countdown_start_ || !backoff_pending_) return MacStateKind::WaitDifs;
    return MacStateKind::BackoffCounting;
  }
  return backoff_pending_ ? MacStateKind::BackoffFrozen : MacStateKind::Idle;
}

bool DcfMac::wants_access() const {
  return (backoff_pending_ || !queue_.empty()) && phase_ == Phase::None && !responding_;
}

bool DcfMac::medium_busy() const {
  return channel_.channel_busy(id_) || nav_until_ > sim_.now();
}

SimTime DcfMac::idle_reference() const {
  return std::max({phys_idle_since_, nav_until_, exchange_end_});
}

void DcfMac::freeze_countdown() {
  if (!sim_.pending(access_event_)) return;
  sim_.cancel(access_event_);
  if (backoff_pending_ && sim_.now() > countdown_start_) {
    const auto idle_slots = static_cast<std::uint64_t>((sim_.now() - countdown_start_) / params_.slot_time);
    backoff_slots_ -= static_cast<std::uint32_t>(std::min<std::uint64_t>(backoff_slots_, idle_slots));
    trace("FREEZE", "-", fmt::format("slots={}", backoff_slots_));
  }
}

void DcfMac::start_backoff() {
  const BackoffDraw draw = draw_backoff(retry_.cw(), params_.slot_time, sim_.rng());
  backoff_slots_ = draw.slots;
  backoff_pending_ = true;
  trace("BACKOFF", "-", fmt::format("slots={}", draw.slots));
}

void DcfMac::reschedule_access() {
  if (!wants_access()) {
    freeze_countdown();
    return;
  }
  if (medium_busy()) {
    freeze_countdown();
    // Medium found busy at access time: defer with a random backoff.
    if (!backoff_pending_) start_backoff();
    return;
  }
  sim_.cancel(access_event_);
  countdown_start_ = idle_reference() + params_.difs;
  const SimTime fire = countdown_start_ + (backoff_pending_ ? backoff_slots_ * params_.slot_time : SimTime{0});
  access_event_ = sim_.schedule_at(std::max(fire, sim_.now()), [this] { on_access_granted(); });
}

void DcfMac::on_access_granted() {
  access_event_ = EventHandle{};
  backoff_pending_ = false;
  backoff_slots_ = 0;
  if (queue_.empty()) return;  // post-backoff finished with nothing to send
  start_exchange();
}

void DcfMac::start_exchange() {
  const Outbound& head = queue_.front();
  if (head.packet.size_bytes > params_.rts_threshold_bytes) {
    send_rts();
  } else {
    send_data();
  }
}

void DcfMac::send_rts() {
  const Outbound& head = queue_.front();
  Frame rts;
  rts.kind = FrameKind::Rts;
  rts.src = id_;
  rts.dst = head.next_hop;
  rts.duration_field = 3 * params_.sifs + cts_duration() + data_duration(head.packet.size_bytes) +
                       ack_duration();
  phase_ = Phase::TxRts;
  ++counters_.rts_sent;
  trace("TX", "RTS", fmt::format("dst={}", rts.dst));
  channel_.begin_transmission(id_, std::move(rts), rts_duration());
}

void DcfMac::send_data() {
  data_event_ = EventHandle{};
  const Outbound& head = queue_.front();
  Frame data;
  data.kind = FrameKind::Data;
  data.src = id_;
  data.dst = head.next_hop;
  data.payload_bytes = head.packet.size_bytes;
  data.duration_field = params_.sifs + ack_duration();
  data.mac_seq = head.mac_seq;
  data.packet = head.packet;
  phase_ = Phase::TxData;
  ++counters_.data_sent;
  if (hooks_.data_attempt) hooks_.data_attempt(head.packet);
  trace("TX", "DATA", fmt::format("dst={} copy={}", data.dst, head.packet.copy_id));
  channel_.begin_transmission(id_, std::move(data), data_duration(head.packet.size_bytes));
}

void DcfMac::send_response(Frame frame) {
  if (channel_.transmitting(id_)) {
    responding_ = false;
    reschedule_access();
    return;
  }
  const SimTime duration = frame.kind == FrameKind::Cts ? cts_duration() : ack_duration();
  trace("TX", to_string(frame.kind), fmt::format("dst={}", frame.dst));
  channel_.begin_transmission(id_, std::move(frame), duration);
}

void DcfMac::on_tx_end(const Frame& frame) {
  switch (frame.kind) {
    case FrameKind::Rts:
      phase_ = Phase::WaitCts;
      timeout_event_ = sim_.schedule_in(params_.sifs + cts_duration() + 2 * max_prop_,
                                        [this] { on_timeout(TxFailure::Rts); });
      break;
    case FrameKind::Data:
      phase_ = Phase::WaitAck;
      timeout_event_ = sim_.schedule_in(params_.sifs + ack_duration() + 2 * max_prop_,
                                        [this] { on_timeout(TxFailure::Data); });
      break;
    case FrameKind::Cts:
    case FrameKind::Ack:
      responding_ = false;
      reschedule_access();
      break;
  }
}

void DcfMac::on_rx_end(const Frame& frame, RxOutcome outcome) {
  if (outcome != RxOutcome::Decoded) {
    if (frame.dst == id_) {
      ++counters_.collisions_seen;
      trace("COLL", to_string(frame.kind), fmt::format("from={}", frame.src));
      if (frame.kind == FrameKind::Data && hooks_.data_collision)
        hooks_.data_collision(*frame.packet, frame.src);
    }
    return;
  }

  if (frame.dst != id_) {
    if (frame.duration_field > SimTime{0}) set_nav(sim_.now() + frame.duration_field);
    return;
  }

  trace("RX", to_string(frame.kind), fmt::format("from={}", frame.src));
  switch (frame.kind) {
    case FrameKind::Rts: {
      if (phase_ != Phase::None || responding_ || nav_until_ > sim_.now()) return;
      responding_ = true;
      freeze_countdown();
      Frame cts;
      cts.kind = FrameKind::Cts;
      cts.src = id_;
      cts.dst = frame.src;
      cts.duration_field =
          std::max(SimTime{0}, frame.duration_field - params_.sifs - cts_duration());
      sim_.schedule_in(params_.sifs, [this, cts = std::move(cts)]() mutable {
        send_response(std::move(cts));
      });
      break;
    }
    case FrameKind::Cts: {
      if (phase_ != Phase::WaitCts || queue_.empty() || frame.src != queue_.front().next_hop) return;
      sim_.cancel(timeout_event_);
      phase_ = Phase::TxData;
      data_event_ = sim_.schedule_in(params_.sifs, [this] { send_data(); });
      break;
    }
    case FrameKind::Data: {
      if (phase_ != Phase::None || responding_) return;
      responding_ = true;
      freeze_countdown();
      auto [it, inserted] = last_seq_from_.try_emplace(frame.src, frame.mac_seq);
      const bool fresh = inserted || it->second != frame.mac_seq;
      it->second = frame.mac_seq;
      Frame ack;
      ack.kind = FrameKind::Ack;
      ack.src = id_;
      ack.dst = frame.src;
      sim_.schedule_in(params_.sifs, [this, ack = std::move(ack)]() mutable {
        send_response(std::move(ack));
      });
      if (fresh) {
        if (hooks_.deliver) hooks_.deliver(*frame.packet, frame.src);
      } else {
        ++counters_.duplicates;
      }
      break;
    }
    case FrameKind::Ack: {
      if (phase_ != Phase::WaitAck || queue_.empty() || frame.src != queue_.front().next_hop) return;
      sim_.cancel(timeout_event_);
      finish_success();
      break;
    }
  }
}

void DcfMac::on_timeout(TxFailure stage) {
  timeout_event_ = EventHandle{};
  if (stage == TxFailure::Rts) {
    ++counters_.cts_timeouts;
  } else {
    ++counters_.ack_timeouts;
  }
  finish_failure(stage);
}

void DcfMac::finish_success() {
  phase_ = Phase::None;
  exchange_end_ = sim_.now();
  retry_.on_success();
  const Outbound done = std::move(queue_.front());
  queue_.pop_front();
  trace("SUCCESS", "DATA", fmt::format("copy={}", done.packet.copy_id));
  if (hooks_.hop_success) hooks_.hop_success(done.packet, done.next_hop);
  start_backoff();
  reschedule_access();
}

void DcfMac::finish_failure(TxFailure stage) {
  phase_ = Phase::None;
  exchange_end_ = sim_.now();
  const auto verdict = retry_.on_failure(stage);
  trace("TIMEOUT", stage == TxFailure::Rts ? "CTS" : "ACK");
  if (verdict == RetryState::Verdict::Discard) {
    const Outbound dropped = std::move(queue_.front());
    queue_.pop_front();
    trace("DROP", "DATA", fmt::format("RET copy={}", dropped.packet.copy_id));
    if (hooks_.retry_exhausted) hooks_.retry_exhausted(dropped.packet, dropped.next_hop, stage);
  }
  start_backoff();
  reschedule_access();
}

void DcfMac::set_nav(SimTime until) {
  if (until <= nav_until_) return;
  nav_until_ = until;
  trace("NAV", "-", fmt::format("until={}", until.count()));
  sim_.cancel(nav_event_);
  nav_event_ = sim_.schedule_at(until, [this] {
    nav_event_ = EventHandle{};
    reschedule_access();
  });
  reschedule_access();
}

void DcfMac::on_channel_busy() { reschedule_access(); }

void DcfMac::on_channel_idle() {
  phys_idle_since_ = sim_.now();
  reschedule_access();
}

void DcfMac::trace(std::string_view event, std::string_view kind, std::string_view detail) const {
  if (!trace_) return;
  *trace_ << fmt::format("{} {} {} {} cw={} sr={} lr={} {}\n", sim_.now().count(), id_, event, kind,
                         retry_.cw(), retry_.short_retry(), retry_.long_retry(), detail);
}

}  // namespace dcfsim
