#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "dcfsim/rng.hpp"
#include "dcfsim/time.hpp"

namespace dcfsim {

/// Raised when an event is scheduled before the current simulation time.
class SchedulingError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Identifies a scheduled event so it can be cancelled. A default-constructed
/// handle refers to no event.
class EventHandle {
 public:
  EventHandle() = default;
  bool valid() const { return seq_ != 0; }
  std::uint64_t seq() const { return seq_; }

 private:
  friend class Simulator;
  explicit EventHandle(std::uint64_t seq) : seq_{seq} {}
  std::uint64_t seq_ = 0;
};

/// Single-threaded discrete-event engine. Events fire in (fire_at, seq) order,
/// where seq is the insertion counter, so simultaneous events are resolved
/// deterministically. Owns the run's single random stream.
class Simulator {
 public:
  using Action = std::function<void()>;

  explicit Simulator(std::uint64_t seed = 1) : rng_{seed} {}
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  SimTime now() const { return now_; }
  Rng& rng() { return rng_; }

  EventHandle schedule_at(SimTime fire_at, Action action);
  EventHandle schedule_in(SimTime delay, Action action) {
    return schedule_at(now_ + delay, std::move(action));
  }

  /// Returns true if the event was still pending.
  bool cancel(EventHandle& handle);
  bool pending(const EventHandle& handle) const {
    return handle.valid() && actions_.contains(handle.seq());
  }

  /// Fires every event with fire_at <= t_end, then advances now() to t_end.
  std::uint64_t run_until(SimTime t_end);

  std::size_t pending_count() const { return actions_.size(); }
  std::uint64_t fired_count() const { return fired_; }

 private:
  struct Key {
    SimTime fire_at;
    std::uint64_t seq;
    bool operator>(const Key& o) const {
      return fire_at != o.fire_at ? fire_at > o.fire_at : seq > o.seq;
    }
  };

  SimTime now_{0};
  std::uint64_t next_seq_ = 1;
  std::uint64_t fired_ = 0;
  std::priority_queue<Key, std::vector<Key>, std::greater<Key>> queue_;
  std::unordered_map<std::uint64_t, Action> actions_;
  Rng rng_;
};

}  // namespace dcfsim
