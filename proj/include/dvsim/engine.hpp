#pragma once

#include <cstdint>
#include <functional>
#include <unordered_set>
#include <vector>

#include "dvsim/time.hpp"

namespace dvsim {

struct EventHandle {
  std::uint64_t seq = 0;
};

/// Single-threaded discrete-event scheduler.
///
/// Events fire in (time, insertion sequence) order. `now()` never decreases.
class Engine {
 public:
  using Action = std::function<void()>;

  SimTime now() const { return now_; }

  /// Throws std::logic_error when `at` is earlier than now().
  EventHandle schedule(SimTime at, Action action);
  EventHandle schedule_in(SimTime delay, Action action) {
    return schedule(now_ + delay, std::move(action));
  }
  void cancel(EventHandle handle);

  /// Processes every event with fire time <= end, then sets now() = end.
  void run_until(SimTime end);

  std::size_t pending() const { return queue_.size() - cancelled_.size(); }
  std::uint64_t processed() const { return processed_; }

 private:
  struct Event {
    SimTime at;
    std::uint64_t seq;
    Action action;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.at != b.at ? a.at > b.at : a.seq > b.seq;
    }
  };

  SimTime now_;
  std::uint64_t next_seq_ = 1;
  std::uint64_t processed_ = 0;
  std::vector<Event> queue_;
  std::unordered_set<std::uint64_t> cancelled_;
};

}  // namespace dvsim
