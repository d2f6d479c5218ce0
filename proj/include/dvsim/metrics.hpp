#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string_view>

#include "dvsim/time.hpp"

namespace dvsim {

enum class MetricKind : std::uint8_t { kHop, kEtx, kInvEtx, kEtt, kMl, kMd };

inline constexpr std::array<MetricKind, 6> kAllMetrics = {
    MetricKind::kHop, MetricKind::kEtx, MetricKind::kInvEtx,
    MetricKind::kEtt, MetricKind::kMl,  MetricKind::kMd};

std::string_view to_string(MetricKind kind);
std::optional<MetricKind> parse_metric(std::string_view name);

/// True for metrics that broadcast windowed delivery probes.
constexpr bool uses_delivery_probes(MetricKind k) {
  return k == MetricKind::kEtx || k == MetricKind::kInvEtx || k == MetricKind::kEtt ||
         k == MetricKind::kMl;
}

enum class Direction : std::uint8_t { kMinimize, kMaximize };
enum class Aggregation : std::uint8_t { kAdditive, kMultiplicative };

/// How path values are built from link values and which value wins.
struct Comparator {
  Direction direction = Direction::kMinimize;
  Aggregation aggregation = Aggregation::kAdditive;

  constexpr double identity() const {
    return aggregation == Aggregation::kAdditive ? 0.0 : 1.0;
  }
  /// Value carried by a broken or unusable route.
  constexpr double worst() const {
    return direction == Direction::kMinimize ? std::numeric_limits<double>::infinity() : 0.0;
  }
  constexpr double combine(double path, double link) const {
    return aggregation == Aggregation::kAdditive ? path + link : path * link;
  }
  /// Strict preference of `a` over `b`.
  constexpr bool better(double a, double b) const {
    return direction == Direction::kMinimize ? a < b : a > b;
  }
  constexpr bool usable(double v) const {
    return direction == Direction::kMinimize ? v < std::numeric_limits<double>::infinity()
                                             : v > 0.0;
  }
  /// Maximizing an additive value rewards longer paths, so distance-vector
  /// exchange can form loops unless paths are carried and checked.
  constexpr bool needs_path_check() const {
    return direction == Direction::kMaximize && aggregation == Aggregation::kAdditive;
  }
};

constexpr Comparator comparator_for(MetricKind kind) {
  switch (kind) {
    case MetricKind::kInvEtx: return {Direction::kMaximize, Aggregation::kAdditive};
    case MetricKind::kMl: return {Direction::kMaximize, Aggregation::kMultiplicative};
    default: return {Direction::kMinimize, Aggregation::kAdditive};
  }
}

/// Link or path value tagged with its metric. Seconds for ETT and MD,
/// dimensionless otherwise.
struct MetricValue {
  MetricKind kind = MetricKind::kHop;
  double value = 0.0;

  bool usable() const { return comparator_for(kind).usable(value); }
  static MetricValue unusable(MetricKind kind) { return {kind, comparator_for(kind).worst()}; }
};

// Per-link evaluators. d_f and d_r are delivery ratios in [0, 1].

MetricValue hop_link();
MetricValue etx_link(double d_f, double d_r);
MetricValue invetx_link(double d_f, double d_r);
/// ETX scaled by the time to send `frame_bytes` at `bandwidth_bps`.
MetricValue ett_link(MetricValue etx, double frame_bytes, double bandwidth_bps);
MetricValue ml_link(double d_f, double d_r);

/// Packet-pair dispersion from two receiver timestamps. The sender stamp and
/// any receiver clock offset cancel. Empty when the pair arrived reordered.
std::optional<SimTime> md_dispersion(SimTime recv_first, SimTime recv_second);

/// Minimum of the observed dispersions, or unusable with no samples.
MetricValue md_link_delay(std::span<const SimTime> samples);

/// Bits of `bytes` divided by the smallest dispersion sample.
std::optional<double> bandwidth_from_dispersion(std::uint32_t bytes,
                                                std::span<const SimTime> samples);

/// Aggregates link values into a path value. An empty path yields the
/// metric's identity; any unusable link makes the path unusable. Throws
/// std::invalid_argument on mixed kinds.
MetricValue path_metric(MetricKind kind, std::span<const MetricValue> links);

}  // namespace dvsim
