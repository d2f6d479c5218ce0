#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <set>
#include <utility>
#include <vector>

#include "dvsim/engine.hpp"
#include "dvsim/packet.hpp"
#include "dvsim/random.hpp"
#include "dvsim/topology.hpp"

namespace dvsim {

/// Result of a unicast with link-layer retransmissions.
struct ReliableOutcome {
  bool delivered = false;
  SimTime arrival;
  int attempts = 0;
};

/// Packet delivery service over a Topology.
///
/// Each copy of a transmission is received independently with the link's
/// delivery probability; received copies arrive after size*8/B plus the
/// propagation delay. There is no queueing or contention.
class Channel {
 public:
  using Receiver = std::function<void(NodeId to, const PacketPtr& packet)>;

  Channel(const Topology& topology, Engine& engine, std::uint64_t seed);

  void set_receiver(Receiver receiver) { receiver_ = std::move(receiver); }
  /// One line per delivery/drop decision: time kind src dst uid outcome.
  void set_trace(std::ostream* trace) { trace_ = trace; }

  /// Forces a directed link to probability 0 from now on.
  void fail_link(NodeId from, NodeId to) { failed_.insert({from, to}); }
  void restore_link(NodeId from, NodeId to) { failed_.erase({from, to}); }

  double probability(NodeId from, NodeId to) const;
  SimTime tx_time(std::uint32_t bytes, NodeId from, NodeId to) const;

  /// Broadcast to every in-range neighbor. `after_bytes` delays the start of
  /// transmission by the airtime of that many bytes on each link, which is
  /// how a back-to-back second packet is sent. Returns copies delivered.
  std::size_t broadcast(const PacketPtr& packet, std::uint32_t after_bytes = 0);

  /// Single attempt, no retransmission. Non-neighbors never receive.
  bool unicast(const PacketPtr& packet, std::uint32_t after_bytes = 0);

  /// Unicast with up to `retry_limit` retransmissions. An attempt ends when
  /// the receiver's link-layer ack makes it back; a data copy that got
  /// through with its ack lost still counts as delivered. Schedules the
  /// receiver callback for the first received copy only.
  ReliableOutcome send_reliable(const PacketPtr& packet, int retry_limit);

  std::uint64_t transmissions() const { return transmissions_; }

 private:
  bool draw(NodeId from, NodeId to);
  void deliver_at(SimTime at, NodeId to, const PacketPtr& packet);
  void trace(const Packet& p, NodeId to, const char* outcome);

  const Topology& topology_;
  Engine& engine_;
  std::uint64_t seed_;
  std::vector<Rng> rng_;
  Receiver receiver_;
  std::ostream* trace_ = nullptr;
  std::set<std::pair<NodeId, NodeId>> failed_;
  std::uint64_t transmissions_ = 0;
};

}  // namespace dvsim
