#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dvsim/config.hpp"
#include "dvsim/cost_model.hpp"
#include "dvsim/metrics.hpp"
#include "dvsim/stats.hpp"
#include "dvsim/topology.hpp"

namespace dvsim {

/// One simulation run, flattened for CSV.
struct RunRow {
  MetricKind metric = MetricKind::kHop;
  std::uint64_t seed = 0;
  std::size_t topology_id = 0;
  double rate = 0.0;
  double duration = 0.0;
  double throughput_bps = 0.0;
  std::optional<double> e2ed_s;  // round-trip time in RTT mode
  std::optional<double> nrl;
  std::uint64_t data_sent = 0;
  std::uint64_t data_delivered = 0;
  std::uint64_t routing_packets = 0;
  std::array<std::uint64_t, kDropCauseCount> drops{};
  RoutingCounters routing;
  std::uint64_t route_computations = 0;
  std::size_t nodes = 0;
  double steady_throughput_bps = 0.0;
  std::optional<double> steady_e2ed_s;
  std::optional<double> steady_nrl;

  bool operator==(const RunRow&) const = default;
};

/// Mean over topologies for one (metric, rate). Optional columns average
/// only the runs that have a value.
struct AggregateRow {
  MetricKind metric = MetricKind::kHop;
  double rate = 0.0;
  std::size_t runs = 0;
  double throughput_bps = 0.0;
  std::optional<double> e2ed_s;
  std::optional<double> nrl;
  double data_sent = 0.0;
  double data_delivered = 0.0;
  double routing_packets = 0.0;
};

struct SweepResult {
  std::vector<RunRow> runs;
  std::vector<AggregateRow> aggregates;
};

/// Topology `index` of the scenario: loaded from topology_file when set,
/// otherwise drawn from derive_seed(seed, index).
Topology scenario_topology(const ScenarioConfig& cfg, std::size_t index);

/// Seed shared by every metric for (topology, rate), so metrics are compared
/// on identical traffic.
std::uint64_t run_seed(const ScenarioConfig& cfg, std::size_t topology_id, double rate);

struct RunOutputs {
  std::ostream* trace = nullptr;
  std::ostream* estimate_log = nullptr;
};

/// Runs one (metric, rate, topology) cell. Throws std::logic_error if the
/// run fails its conservation audit.
RunRow run_one(const ScenarioConfig& cfg, const Topology& topology, std::size_t topology_id,
               MetricKind metric, double rate, RunOutputs outputs = {});

/// Runs every (metric, rate, topology) cell on up to `workers` threads.
/// Rows come back sorted by (metric, rate, topology) whatever the worker
/// count. With `out_dir` set, per-run trace and estimate logs are written
/// under it when the config asks for them. `progress` gets one line per run.
SweepResult run_scenario(const ScenarioConfig& cfg, unsigned workers = 1,
                         std::ostream* progress = nullptr,
                         const std::optional<std::filesystem::path>& out_dir = std::nullopt);

std::vector<AggregateRow> aggregate(const std::vector<RunRow>& runs);

void write_runs_csv(std::ostream& os, const std::vector<RunRow>& runs);
void write_aggregate_csv(std::ostream& os, const std::vector<AggregateRow>& rows);
/// Inverse of write_runs_csv. Throws std::runtime_error on malformed input.
std::vector<RunRow> read_runs_csv(std::istream& is);

/// Writes runs.csv, aggregate.csv, summary.txt and config.txt into `dir`.
void write_sweep(const std::filesystem::path& dir, const ScenarioConfig& cfg,
                 const SweepResult& result);

struct Ranking {
  std::string parameter;  // throughput_bps, e2ed_s or nrl
  double rate = 0.0;
  std::vector<MetricKind> order;  // best first
};

struct Claim {
  std::string description;
  std::optional<bool> holds;  // empty when the needed metrics are absent
  std::string detail;
};

struct Summary {
  std::vector<Ranking> rankings;
  std::vector<Claim> claims;
};

/// Orders metrics best to worst per parameter and rate, and checks the
/// expected orderings: ETT has the highest routing load, MD the lowest
/// among probing metrics, and InvETX leads throughput at the upper half of
/// the rates. Throws std::invalid_argument on empty input.
Summary summarize(const std::vector<AggregateRow>& rows);
void write_summary(std::ostream& os, const Summary& summary);

/// Cost-model inputs measured from a run: probe rates are per run
/// (network-wide) and τ_NL is the run duration.
cost::CostParams params_from_run(const RunRow& row, cost::CostParams base = {});

}  // namespace dvsim
