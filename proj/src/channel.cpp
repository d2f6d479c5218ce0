#include "dvsim/channel.hpp"

#include <cmath>
#include <ostream>

namespace dvsim {

std::string_view to_string(PacketKind kind) {
  switch (kind) {
    case PacketKind::kData: return "Data";
    case PacketKind::kMetricProbe: return "MetricProbe";
    case PacketKind::kPairProbeSmall: return "PairProbeSmall";
    case PacketKind::kPairProbeLarge: return "PairProbeLarge";
    case PacketKind::kPairAck: return "PairAck";
    case PacketKind::kRouteUpdateFull: return "RouteUpdateFull";
    case PacketKind::kRouteUpdateIncremental: return "RouteUpdateIncremental";
  }
  return "?";
}

Channel::Channel(const Topology& topology, Engine& engine, std::uint64_t seed)
    : topology_(topology), engine_(engine), seed_(seed) {
  rng_.reserve(topology.size());
  for (NodeId i = 0; i < topology.size(); ++i) {
    rng_.push_back(make_stream(seed, i, Stream::kChannel));
  }
}

double Channel::probability(NodeId from, NodeId to) const {
  if (!failed_.empty() && failed_.count({from, to})) return 0.0;
  return topology_.delivery_probability(from, to);
}

SimTime Channel::tx_time(std::uint32_t bytes, NodeId from, NodeId to) const {
  return SimTime::from_seconds(bytes * 8.0 / topology_.bandwidth(from, to));
}

bool Channel::draw(NodeId from, NodeId to) {
  // Always consume one draw so the stream stays aligned regardless of p.
  const double u = uniform01(rng_[from]);
  return u < probability(from, to);
}

void Channel::deliver_at(SimTime at, NodeId to, const PacketPtr& packet) {
  engine_.schedule(at, [this, to, packet] {
    if (receiver_) receiver_(to, packet);
  });
}

void Channel::trace(const Packet& p, NodeId to, const char* outcome) {
  if (!trace_) return;
  *trace_ << engine_.now() << ' ' << to_string(p.kind) << ' ' << p.src << ' ' << to << ' '
          << p.uid << ' ' << outcome << '\n';
}

std::size_t Channel::broadcast(const PacketPtr& packet, std::uint32_t after_bytes) {
  ++transmissions_;
  std::size_t delivered = 0;
  const NodeId from = packet->src;
  for (NodeId to : topology_.neighbors(from)) {
    if (draw(from, to)) {
      const SimTime start = engine_.now() + tx_time(after_bytes, from, to);
      deliver_at(start + tx_time(packet->size, from, to) + topology_.propagation_delay(), to,
                 packet);
      trace(*packet, to, "delivered");
      ++delivered;
    } else {
      trace(*packet, to, "lost");
    }
  }
  return delivered;
}

bool Channel::unicast(const PacketPtr& packet, std::uint32_t after_bytes) {
  ++transmissions_;
  const NodeId from = packet->src;
  const NodeId to = packet->dst;
  if (!topology_.in_range(from, to)) {
    trace(*packet, to, "not_neighbor");
    return false;
  }
  if (!draw(from, to)) {
    trace(*packet, to, "lost");
    return false;
  }
  const SimTime start = engine_.now() + tx_time(after_bytes, from, to);
  deliver_at(start + tx_time(packet->size, from, to) + topology_.propagation_delay(), to,
             packet);
  trace(*packet, to, "delivered");
  return true;
}

ReliableOutcome Channel::send_reliable(const PacketPtr& packet, int retry_limit) {
  const NodeId from = packet->src;
  const NodeId to = packet->dst;
  ReliableOutcome out;
  if (!topology_.in_range(from, to)) {
    ++transmissions_;
    out.attempts = 1;
    trace(*packet, to, "not_neighbor");
    return out;
  }
  const SimTime data_time = tx_time(packet->size, from, to);
  const SimTime ack_time = tx_time(kMacAckBytes, to, from);
  const SimTime prop = topology_.propagation_delay();
  const SimTime cycle = data_time + ack_time + prop + prop;

  SimTime start = engine_.now();
  for (int attempt = 0; attempt <= retry_limit; ++attempt, start += cycle) {
    ++transmissions_;
    ++out.attempts;
    const bool data_ok = draw(from, to);
    const bool ack_ok = draw(to, from);
    if (data_ok && !out.delivered) {
      out.delivered = true;
      out.arrival = start + data_time + prop;
    }
    if (data_ok && ack_ok) break;
  }
  if (out.delivered) {
    deliver_at(out.arrival, to, packet);
    trace(*packet, to, "delivered");
  } else {
    trace(*packet, to, "retry_exhausted");
  }
  return out;
}

}  // namespace dvsim
