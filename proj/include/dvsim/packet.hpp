#pragma once

#include <cstdint>
#include <memory>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dvsim/time.hpp"
#include "dvsim/topology.hpp"

namespace dvsim {

enum class PacketKind : std::uint8_t {
  kData,
  kMetricProbe,
  kPairProbeSmall,
  kPairProbeLarge,
  kPairAck,
  kRouteUpdateFull,
  kRouteUpdateIncremental,
};

std::string_view to_string(PacketKind kind);

inline constexpr std::uint32_t kPairSmallBytes = 137;
inline constexpr std::uint32_t kPairLargeBytes = 1137;
inline constexpr std::uint32_t kPairAckBytes = 64;
inline constexpr std::uint32_t kMacAckBytes = 14;
inline constexpr std::uint32_t kHeaderBytes = 20;
inline constexpr std::uint32_t kRouteEntryBytes = 12;
inline constexpr std::uint32_t kProbeEntryBytes = 6;

struct DataPayload {
  /// Stable across hops; each hop's Packet has its own uid.
  std::uint64_t id = 0;
  NodeId origin = 0;
  NodeId final_dst = 0;
  std::uint32_t flow = 0;
  SimTime sent_at;
  int ttl = 64;
  bool echo = false;
};

/// Probe counts heard from each neighbor within the sender's window.
struct ProbePayload {
  std::vector<std::pair<NodeId, std::uint32_t>> heard;
};

struct PairPayload {
  std::uint64_t pair_id = 0;
  SimTime sender_stamp;
};

struct PairAckPayload {
  std::uint64_t pair_id = 0;
  SimTime dispersion;
};

/// One advertised row of a DSDV dump.
struct RouteAdvert {
  NodeId dest = 0;
  double metric = 0.0;
  std::uint32_t hop_count = 0;
  std::uint32_t seq = 0;
  /// Node sequence from the advertiser to `dest`; only carried when the
  /// metric needs path-based loop suppression.
  std::vector<NodeId> path;
};

struct RouteUpdatePayload {
  std::vector<RouteAdvert> entries;
};

using Payload = std::variant<std::monostate, DataPayload, ProbePayload, PairPayload,
                             PairAckPayload, RouteUpdatePayload>;

struct Packet {
  PacketKind kind = PacketKind::kData;
  std::uint32_t size = 0;
  NodeId src = 0;
  NodeId dst = kBroadcast;
  SimTime created_at;
  std::uint64_t uid = 0;
  Payload payload;

  bool is_routing() const { return kind != PacketKind::kData; }
};

using PacketPtr = std::shared_ptr<const Packet>;

}  // namespace dvsim
