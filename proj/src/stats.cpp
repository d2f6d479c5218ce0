#include "dvsim/stats.hpp"

#include <numeric>

namespace dvsim {

std::string_view to_string(DropCause cause) {
  switch (cause) {
    case DropCause::kNoRoute: return "no_route";
    case DropCause::kRetryExhausted: return "retry_exhausted";
    case DropCause::kNotNeighbor: return "not_neighbor";
    case DropCause::kTtl: return "ttl";
    case DropCause::kLoop: return "loop";
    case DropCause::kInFlight: return "in_flight";
  }
  return "?";
}

void RoutingCounters::count(PacketKind kind) {
  switch (kind) {
    case PacketKind::kMetricProbe: ++metric_probes; break;
    case PacketKind::kPairProbeSmall:
    case PacketKind::kPairProbeLarge: ++pair_probes; break;
    case PacketKind::kPairAck: ++pair_acks; break;
    case PacketKind::kRouteUpdateFull: ++full_dumps; break;
    case PacketKind::kRouteUpdateIncremental: ++incremental_dumps; break;
    case PacketKind::kData: break;
  }
}

std::uint64_t RunStats::total_drops() const {
  return std::accumulate(drops.begin(), drops.end(), std::uint64_t{0});
}

void RunStats::record_routing(PacketKind kind, SimTime now) {
  routing.count(kind);
  ++routing_packets_sent;
  if (now >= warmup) ++steady_routing;
}

std::vector<std::string> RunStats::audit() const {
  std::vector<std::string> bad;
  if (data_sent != data_delivered + total_drops()) {
    bad.push_back("data_sent " + std::to_string(data_sent) + " != delivered " +
                  std::to_string(data_delivered) + " + drops " + std::to_string(total_drops()));
  }
  if (routing.total() != routing_packets_sent) {
    bad.push_back("routing decomposition " + std::to_string(routing.total()) +
                  " != routing_packets_sent " + std::to_string(routing_packets_sent));
  }
  if (delays.size() != data_delivered) {
    bad.push_back("delay records " + std::to_string(delays.size()) + " != delivered " +
                  std::to_string(data_delivered));
  }
  if (data_delivered > data_sent) bad.push_back("delivered exceeds sent");
  return bad;
}

double throughput(const RunStats& stats, SimTime duration) {
  if (duration.ns() <= 0) return 0.0;
  return static_cast<double>(stats.data_delivered) * stats.packet_size * 8.0 /
         duration.seconds();
}

std::optional<double> e2ed(const RunStats& stats) {
  if (stats.delays.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto& d : stats.delays) sum += (d.delivered_at - d.sent_at).seconds();
  return sum / static_cast<double>(stats.delays.size());
}

std::optional<double> mean_rtt(const RunStats& stats) {
  if (stats.round_trips.empty()) return std::nullopt;
  double sum = 0.0;
  for (auto t : stats.round_trips) sum += t.seconds();
  return sum / static_cast<double>(stats.round_trips.size());
}

std::optional<double> nrl(const RunStats& stats) {
  if (stats.data_delivered == 0) return std::nullopt;
  return static_cast<double>(stats.routing_packets_sent) /
         static_cast<double>(stats.data_delivered);
}

double steady_throughput(const RunStats& stats, SimTime duration) {
  const SimTime span = duration - stats.warmup;
  if (span.ns() <= 0) return 0.0;
  return static_cast<double>(stats.steady_delivered) * stats.packet_size * 8.0 / span.seconds();
}

std::optional<double> steady_e2ed(const RunStats& stats) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& d : stats.delays) {
    if (d.sent_at < stats.warmup) continue;
    sum += (d.delivered_at - d.sent_at).seconds();
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

std::optional<double> steady_nrl(const RunStats& stats) {
  if (stats.steady_delivered == 0) return std::nullopt;
  return static_cast<double>(stats.steady_routing) /
         static_cast<double>(stats.steady_delivered);
}

}  // namespace dvsim
