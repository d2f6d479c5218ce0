#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <unordered_set>
#include <vector>

#include "dvsim/channel.hpp"
#include "dvsim/engine.hpp"
#include "dvsim/link_estimator.hpp"
#include "dvsim/metrics.hpp"
#include "dvsim/routing_table.hpp"
#include "dvsim/stats.hpp"
#include "dvsim/topology.hpp"
#include "dvsim/traffic.hpp"

namespace dvsim {

/// Per-route processing time charged when a node folds an advertisement
/// into its table, indexed by MetricKind.
using ComputationDelays = std::array<double, kAllMetrics.size()>;

inline constexpr ComputationDelays kDefaultComputationDelays = {
    /*hop*/ 10e-6, /*etx*/ 60e-6, /*invetx*/ 20e-6, /*ett*/ 100e-6, /*ml*/ 60e-6, /*md*/ 40e-6};

struct SimParams {
  EstimatorParams estimator;
  SimTime pair_interval = seconds(60.0);
  SimTime full_dump_period = seconds(15.0);
  SimTime incremental_min_interval = seconds(1.0);
  int retry_limit = 3;
  int ttl = 64;
  SimTime duration = seconds(900.0);
  SimTime warmup = seconds(30.0);
  bool rtt = false;
  double clock_offset_max_s = 0.5;
  ComputationDelays computation_delay_s = kDefaultComputationDelays;
};

/// One run of DSDV under a single link metric on a static topology.
class Simulation {
 public:
  Simulation(const Topology& topology, MetricKind metric, SimParams params,
             std::vector<CbrFlow> flows, std::uint64_t seed);

  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  /// Runs to the configured duration and closes the books.
  void run();
  /// Advances without closing the books; may be called repeatedly.
  void run_until(SimTime t);
  /// Counts packets still in the network as in-flight drops.
  void finalize();

  const RunStats& stats() const { return stats_; }
  MetricKind metric() const { return metric_; }
  SimTime now() const { return engine_.now(); }
  const SimParams& params() const { return params_; }

  const RoutingTable& table(NodeId node) const { return nodes_.at(node).table; }
  LinkEstimate& estimate(NodeId node, NodeId neighbor) {
    return nodes_.at(node).links.at(neighbor);
  }
  /// Current cost of node's link to neighbor.
  MetricValue link_cost(NodeId node, NodeId neighbor);

  Channel& channel() { return channel_; }
  Engine& engine() { return engine_; }

  void set_trace(std::ostream* trace);
  /// CSV rows "time,node,neighbor,d_f,d_r,estimated_B,md_delay" every interval.
  void set_estimate_log(std::ostream* log, SimTime interval);
  void dump_tables(std::ostream& os) const;

  /// Per-node timer fire counts, exposed for tests.
  std::uint64_t probe_timer_fires(NodeId node) const { return nodes_.at(node).probe_fires; }
  std::uint64_t full_dump_fires(NodeId node) const { return nodes_.at(node).dump_fires; }

 private:
  struct Node {
    Node(NodeId id, std::size_t n, Comparator cmp, const EstimatorParams& ep);

    RoutingTable table;
    std::vector<LinkEstimate> links;
    SimTime busy_until;
    SimTime clock_offset;
    std::optional<SimTime> last_incremental;
    bool incremental_pending = false;
    std::unordered_set<std::uint64_t> seen;
    Rng timers;
    std::uint64_t probe_fires = 0;
    std::uint64_t dump_fires = 0;
  };

  void start();
  void periodic(SimTime at, SimTime period, std::function<void()> fn);

  void send_routing(PacketPtr packet, bool broadcast, std::uint32_t after_bytes = 0);
  PacketPtr make_packet(PacketKind kind, std::uint32_t size, NodeId src, NodeId dst,
                        Payload payload);

  void on_probe_timer(NodeId node);
  void on_full_dump_timer(NodeId node);
  void on_pair_timer(NodeId node);
  void on_md_pair_timer(NodeId node);
  void check_links(NodeId node);
  void on_link_break(NodeId node, NodeId neighbor);
  void request_incremental(NodeId node);
  void send_incremental(NodeId node);
  void log_estimates();

  void on_receive(NodeId to, const PacketPtr& packet);
  void on_route_update(NodeId node, const PacketPtr& packet);

  void originate(std::size_t flow_index);
  void route_data(NodeId node, DataPayload data);
  void forward_now(NodeId node, DataPayload data);
  void on_data(NodeId node, const PacketPtr& packet);
  void deliver(NodeId node, const DataPayload& data);
  void drop(const DataPayload& data, DropCause cause, NodeId at);

  SimTime local_time(NodeId node) const { return engine_.now() + nodes_[node].clock_offset; }
  std::uint32_t update_size(const std::vector<RouteAdvert>& entries) const;

  const Topology& topology_;
  MetricKind metric_;
  SimParams params_;
  std::vector<CbrFlow> flows_;
  std::uint64_t seed_;

  Engine engine_;
  Channel channel_;
  std::vector<Node> nodes_;
  RunStats stats_;
  std::uint64_t next_uid_ = 1;
  std::uint64_t in_flight_ = 0;
  bool started_ = false;
  bool finalized_ = false;

  std::ostream* trace_ = nullptr;
  std::ostream* estimate_log_ = nullptr;
  SimTime estimate_interval_;
};

}  // namespace dvsim
