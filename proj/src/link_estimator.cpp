#include "dvsim/link_estimator.hpp"

#include <algorithm>

#include "dvsim/packet.hpp"

namespace dvsim {

ProbeWindow::ProbeWindow(SimTime window, SimTime period)
    : window_(window),
      expected_(static_cast<double>(window.ns()) / static_cast<double>(period.ns())) {}

void ProbeWindow::record(SimTime at) { arrivals_.push_back(at); }

void ProbeWindow::prune(SimTime now) {
  const SimTime floor = now - window_;
  while (!arrivals_.empty() && arrivals_.front() <= floor) arrivals_.pop_front();
}

std::size_t ProbeWindow::count(SimTime now) {
  prune(now);
  return static_cast<std::size_t>(
      std::upper_bound(arrivals_.begin(), arrivals_.end(), now) - arrivals_.begin());
}

double ProbeWindow::delivery_ratio(SimTime now) {
  if (!(expected_ > 0.0)) return 0.0;
  return std::clamp(static_cast<double>(count(now)) / expected_, 0.0, 1.0);
}

void SampleRing::push(SimTime sample) {
  if (capacity_ == 0) return;
  if (samples_.size() < capacity_) {
    samples_.push_back(sample);
  } else {
    samples_[next_] = sample;
  }
  next_ = (next_ + 1) % capacity_;
}

LinkEstimate::LinkEstimate(NodeId n, const EstimatorParams& p)
    : neighbor(n),
      probes(p.window, p.probe_period),
      pair_dispersion(p.pair_samples),
      md_dispersion(p.pair_samples),
      md_pairs(p.md_window, p.md_pair_interval),
      updates(p.update_window, p.update_period) {}

double LinkEstimate::d_f(SimTime now) const {
  if (!piggyback_at) return 0.0;
  if (now - *piggyback_at > probes.window() * 2) return 0.0;
  return piggyback_df;
}

std::optional<double> LinkEstimate::estimated_bandwidth() const {
  return bandwidth_from_dispersion(kPairLargeBytes, pair_dispersion.samples());
}

double liveness_ratio(MetricKind kind, LinkEstimate& est, SimTime now) {
  switch (kind) {
    case MetricKind::kHop: return est.updates.delivery_ratio(now);
    case MetricKind::kMd: return est.md_pairs.delivery_ratio(now);
    default: return est.d_r(now);
  }
}

MetricValue link_metric(MetricKind kind, LinkEstimate& est, SimTime now,
                        const EstimatorParams& params) {
  if (liveness_ratio(kind, est, now) < params.dead_link_threshold) {
    return MetricValue::unusable(kind);
  }
  switch (kind) {
    case MetricKind::kHop: return hop_link();
    case MetricKind::kEtx: return etx_link(est.d_f(now), est.d_r(now));
    case MetricKind::kInvEtx: return invetx_link(est.d_f(now), est.d_r(now));
    case MetricKind::kMl: return ml_link(est.d_f(now), est.d_r(now));
    case MetricKind::kEtt: {
      const double bw = est.estimated_bandwidth().value_or(params.nominal_bandwidth_bps);
      return ett_link(etx_link(est.d_f(now), est.d_r(now)), params.frame_bytes, bw);
    }
    case MetricKind::kMd: return md_link_delay(est.md_dispersion.samples());
  }
  return MetricValue::unusable(kind);
}

}  // namespace dvsim
