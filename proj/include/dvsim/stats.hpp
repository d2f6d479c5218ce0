#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dvsim/packet.hpp"
#include "dvsim/time.hpp"

namespace dvsim {

enum class DropCause : std::uint8_t {
  kNoRoute,
  kRetryExhausted,
  kNotNeighbor,
  kTtl,
  kLoop,
  kInFlight,
};
inline constexpr std::size_t kDropCauseCount = 6;
std::string_view to_string(DropCause cause);

/// Routing transmissions by kind. Every broadcast or unicast counts once,
/// including the ones a node sends to propagate what it learned.
struct RoutingCounters {
  std::uint64_t metric_probes = 0;
  std::uint64_t pair_probes = 0;
  std::uint64_t pair_acks = 0;
  std::uint64_t full_dumps = 0;
  std::uint64_t incremental_dumps = 0;

  std::uint64_t total() const {
    return metric_probes + pair_probes + pair_acks + full_dumps + incremental_dumps;
  }
  void count(PacketKind kind);

  bool operator==(const RoutingCounters&) const = default;
};

struct DelayRecord {
  std::uint64_t uid = 0;
  SimTime sent_at;
  SimTime delivered_at;
};

struct RunStats {
  std::uint32_t packet_size = 640;
  SimTime warmup;

  std::uint64_t data_sent = 0;
  std::uint64_t data_delivered = 0;
  std::uint64_t routing_packets_sent = 0;
  RoutingCounters routing;
  std::array<std::uint64_t, kDropCauseCount> drops{};
  std::vector<DelayRecord> delays;

  // Traffic after the warm-up period only.
  std::uint64_t steady_sent = 0;
  std::uint64_t steady_delivered = 0;
  std::uint64_t steady_routing = 0;

  // Round-trip view (echo replies), filled only in RTT mode.
  std::vector<SimTime> round_trips;
  std::uint64_t echoes_lost = 0;

  /// Route entries evaluated while folding in advertisements.
  std::uint64_t route_computations = 0;

  std::uint64_t total_drops() const;
  void record_routing(PacketKind kind, SimTime now);
  void record_drop(DropCause cause) { ++drops[static_cast<std::size_t>(cause)]; }

  /// Conservation and decomposition checks; returns violations.
  std::vector<std::string> audit() const;
};

/// Delivered data bits per second over `duration`.
double throughput(const RunStats& stats, SimTime duration);
/// Mean one-way delay of delivered packets; empty with no deliveries.
std::optional<double> e2ed(const RunStats& stats);
/// Mean round-trip time over returned echoes; empty with none.
std::optional<double> mean_rtt(const RunStats& stats);
/// Routing transmissions per delivered data packet; empty with no deliveries.
std::optional<double> nrl(const RunStats& stats);

/// Warm-up-excluded variants.
double steady_throughput(const RunStats& stats, SimTime duration);
std::optional<double> steady_e2ed(const RunStats& stats);
std::optional<double> steady_nrl(const RunStats& stats);

}  // namespace dvsim
