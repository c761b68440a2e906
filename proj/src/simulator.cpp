#include "dcfsim/simulator.hpp"

#include <string>

namespace dcfsim {

EventHandle Simulator::schedule_at(SimTime fire_at, Action action) {
  if (fire_at < now_) {
    throw SchedulingError("event scheduled in the past: t=" + std::to_string(fire_at.count()) +
                          "ns, now=" + std::to_string(now_.count()) + "ns");
  }
  const std::uint64_t seq = next_seq_++;
  queue_.push(Key{fire_at, seq});
  actions_.emplace(seq, std::move(action));
  return EventHandle{seq};
}

bool Simulator::cancel(EventHandle& handle) {
  const bool erased = handle.valid() && actions_.erase(handle.seq()) > 0;
  handle = EventHandle{};
  return erased;
}

std::uint64_t Simulator::run_until(SimTime t_end) {
  std::uint64_t fired = 0;
  while (!queue_.empty() && queue_.top().fire_at <= t_end) {
    const Key key = queue_.top();
    queue_.pop();
    auto it = actions_.find(key.seq);
    if (it == actions_.end()) continue;  // cancelled
    Action action = std::move(it->second);
    actions_.erase(it);
    now_ = key.fire_at;
    action();
    ++fired;
  }
  if (t_end > now_) now_ = t_end;
  fired_ += fired;
  return fired;
}

}  // namespace dcfsim
