#include "dvsim/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace dvsim {

std::string_view to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::kHop: return "hop";
    case MetricKind::kEtx: return "etx";
    case MetricKind::kInvEtx: return "invetx";
    case MetricKind::kEtt: return "ett";
    case MetricKind::kMl: return "ml";
    case MetricKind::kMd: return "md";
  }
  return "?";
}

std::optional<MetricKind> parse_metric(std::string_view name) {
  for (auto k : kAllMetrics) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

MetricValue hop_link() { return {MetricKind::kHop, 1.0}; }

MetricValue etx_link(double d_f, double d_r) {
  const double success = d_f * d_r;
  if (!(success > 0.0)) return MetricValue::unusable(MetricKind::kEtx);
  return {MetricKind::kEtx, 1.0 / success};
}

MetricValue invetx_link(double d_f, double d_r) { return {MetricKind::kInvEtx, d_f * d_r}; }

MetricValue ett_link(MetricValue etx, double frame_bytes, double bandwidth_bps) {
  if (!etx.usable() || !(bandwidth_bps > 0.0)) return MetricValue::unusable(MetricKind::kEtt);
  return {MetricKind::kEtt, etx.value * (frame_bytes * 8.0 / bandwidth_bps)};
}

MetricValue ml_link(double d_f, double d_r) { return {MetricKind::kMl, d_f * d_r}; }

std::optional<SimTime> md_dispersion(SimTime recv_first, SimTime recv_second) {
  if (recv_second < recv_first) return std::nullopt;
  return recv_second - recv_first;
}

MetricValue md_link_delay(std::span<const SimTime> samples) {
  if (samples.empty()) return MetricValue::unusable(MetricKind::kMd);
  return {MetricKind::kMd, std::min_element(samples.begin(), samples.end())->seconds()};
}

std::optional<double> bandwidth_from_dispersion(std::uint32_t bytes,
                                                std::span<const SimTime> samples) {
  if (samples.empty()) return std::nullopt;
  const SimTime smallest = *std::min_element(samples.begin(), samples.end());
  if (smallest.ns() <= 0) return std::nullopt;
  return bytes * 8.0 / smallest.seconds();
}

MetricValue path_metric(MetricKind kind, std::span<const MetricValue> links) {
  const Comparator cmp = comparator_for(kind);
  double acc = cmp.identity();
  bool usable = true;
  for (const auto& link : links) {
    if (link.kind != kind) throw std::invalid_argument("path_metric: mixed metric kinds");
    if (!link.usable()) usable = false;
    acc = cmp.combine(acc, link.value);
  }
  if (!usable) return MetricValue::unusable(kind);
  return {kind, acc};
}

}  // namespace dvsim
