#include "dvsim/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace dvsim {

EventHandle Engine::schedule(SimTime at, Action action) {
  if (at < now_) throw std::logic_error("event scheduled in the past");
  const std::uint64_t seq = next_seq_++;
  queue_.push_back({at, seq, std::move(action)});
  std::push_heap(queue_.begin(), queue_.end(), Later{});
  return {seq};
}

void Engine::cancel(EventHandle handle) {
  const bool queued = std::any_of(queue_.begin(), queue_.end(),
                                  [&](const Event& e) { return e.seq == handle.seq; });
  if (queued) cancelled_.insert(handle.seq);
}

void Engine::run_until(SimTime end) {
  while (!queue_.empty() && queue_.front().at <= end) {
    std::pop_heap(queue_.begin(), queue_.end(), Later{});
    Event ev = std::move(queue_.back());
    queue_.pop_back();
    if (!cancelled_.empty() && cancelled_.erase(ev.seq) > 0) continue;
    now_ = ev.at;
    ++processed_;
    ev.action();
  }
  if (end > now_) now_ = end;
}

}  // namespace dvsim
