#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "dvsim/metrics.hpp"
#include "dvsim/time.hpp"
#include "dvsim/topology.hpp"

namespace dvsim {

/// Arrival times of one neighbor's periodic probes over a sliding window.
class ProbeWindow {
 public:
  ProbeWindow(SimTime window, SimTime period);

  void record(SimTime at);
  /// Arrivals in (now - window, now].
  std::size_t count(SimTime now);
  /// count / (window / period), clamped to [0, 1].
  double delivery_ratio(SimTime now);
  double expected() const { return expected_; }
  SimTime window() const { return window_; }

 private:
  void prune(SimTime now);

  SimTime window_;
  double expected_;
  std::deque<SimTime> arrivals_;
};

/// The last `capacity` samples of a packet-pair measurement.
class SampleRing {
 public:
  explicit SampleRing(std::size_t capacity = 10) : capacity_(capacity) {}

  void push(SimTime sample);
  std::span<const SimTime> samples() const { return samples_; }
  bool empty() const { return samples_.empty(); }
  std::size_t size() const { return samples_.size(); }

 private:
  std::size_t capacity_;
  std::vector<SimTime> samples_;
  std::size_t next_ = 0;
};

struct EstimatorParams {
  SimTime probe_period = SimTime::from_ns(1'000'000'000);
  SimTime window = SimTime::from_ns(10'000'000'000);
  /// Liveness windows for metrics without delivery probes.
  SimTime md_window = SimTime::from_ns(15'000'000'000);
  SimTime md_pair_interval = SimTime::from_ns(5'000'000'000);
  SimTime update_window = SimTime::from_ns(45'000'000'000);
  SimTime update_period = SimTime::from_ns(15'000'000'000);
  std::size_t pair_samples = 10;
  double frame_bytes = 640.0;
  double nominal_bandwidth_bps = 11e6;
  double dead_link_threshold = 0.1;
};

/// Per-neighbor measurement state kept by one node.
struct LinkEstimate {
  explicit LinkEstimate(NodeId neighbor, const EstimatorParams& params);

  NodeId neighbor;
  bool heard = false;

  // Delivery probes from the neighbor (reverse direction) and the
  // piggybacked count of our probes it heard (forward direction).
  ProbeWindow probes;
  double piggyback_df = 0.0;
  std::optional<SimTime> piggyback_at;

  // ETT: dispersions of our pairs reported back by the neighbor.
  SampleRing pair_dispersion;
  // MD: dispersions of the neighbor's pairs measured here.
  SampleRing md_dispersion;
  ProbeWindow md_pairs;

  // Route updates heard (liveness for the hop-count baseline).
  ProbeWindow updates;

  // Pair reception in progress.
  std::optional<std::uint64_t> pending_pair;
  SimTime pending_first;

  double d_r(SimTime now) { return probes.delivery_ratio(now); }
  /// Piggybacked ratio; decays to 0 once older than twice the window.
  double d_f(SimTime now) const;
  std::optional<double> estimated_bandwidth() const;
};

/// Ratio the dead-link rule applies to for this metric.
double liveness_ratio(MetricKind kind, LinkEstimate& est, SimTime now);

/// Cost of the link to `est.neighbor` under `kind`. Unusable when the
/// liveness ratio is below the dead-link threshold or the metric itself is
/// undefined.
MetricValue link_metric(MetricKind kind, LinkEstimate& est, SimTime now,
                        const EstimatorParams& params);

}  // namespace dvsim
