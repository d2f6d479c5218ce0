#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dvsim/metrics.hpp"
#include "dvsim/simulation.hpp"
#include "dvsim/topology.hpp"

namespace dvsim {

/// Every knob of an experiment sweep. Defaults reproduce the reference
/// setup: 50 nodes on 1000 m × 1000 m, 20 CBR pairs of 640-byte packets,
/// rates 1..10 pkt/s, 900 s runs, 5 topologies, 10 s probe window.
struct ScenarioConfig {
  std::size_t nodes = 50;
  Area area{1000.0, 1000.0};
  LinkModel link{.comm_range_m = 250.0,
                 .inner_range_m = 100.0,
                 .p_max = 1.0,
                 .bandwidth_max_bps = 11e6,
                 .bandwidth_min_bps = 2e6,
                 .propagation_delay_s = 1e-6,
                 .asymmetry_fraction = 0.2,
                 .asymmetry_factor = 0.3};

  std::vector<MetricKind> metrics{kAllMetrics.begin(), kAllMetrics.end()};

  double probe_period_s = 1.0;
  double window_s = 10.0;
  double pair_interval_s = 60.0;
  double md_pair_interval_s = 5.0;
  std::size_t pair_samples = 10;
  double full_dump_period_s = 15.0;
  double incremental_min_interval_s = 1.0;
  double dead_link_threshold = 0.1;
  int retry_limit = 3;
  int ttl = 64;
  double clock_offset_max_s = 0.5;
  ComputationDelays computation_delay_s = kDefaultComputationDelays;

  std::size_t flows = 20;
  std::uint32_t packet_size = 640;
  std::vector<double> rates{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  double flow_start_s = 1.0;
  double duration_s = 900.0;
  double warmup_s = 30.0;
  bool rtt = false;

  std::size_t topologies = 5;
  std::uint64_t seed = 1;
  std::string topology_file;

  bool trace = false;
  double estimate_log_interval_s = 0.0;

  SimParams sim_params() const;

  bool operator==(const ScenarioConfig&) const = default;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

/// Every violated constraint, each prefixed with its field name.
std::vector<std::string> validate_config(const ScenarioConfig& cfg);

/// Line-oriented `key = value`; `#` starts a comment; lists are comma
/// separated. Unknown keys and malformed values throw ConfigError listing
/// every problem. The result is not validated.
ScenarioConfig parse_config(std::istream& is);
ScenarioConfig load_config(const std::string& path);

/// Writes every field; parse_config(write_config(c)) == c.
void write_config(std::ostream& os, const ScenarioConfig& cfg);

}  // namespace dvsim
