#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "dvsim/metrics.hpp"
#include "dvsim/packet.hpp"
#include "dvsim/time.hpp"
#include "dvsim/topology.hpp"

namespace dvsim {

/// DSDV routing-table row. Even sequence numbers are valid routes, odd ones
/// mark a broken route.
struct RouteEntry {
  NodeId dest = 0;
  NodeId next_hop = 0;
  double metric = 0.0;
  std::uint32_t hop_count = 0;
  std::uint32_t seq = 0;
  SimTime installed_at;
  std::vector<NodeId> path;
  bool changed = false;

  bool valid() const { return seq % 2 == 0; }
};

struct UpdateResult {
  std::size_t adopted = 0;
  /// Valid routes replaced by a newer broken advertisement.
  std::size_t newly_broken = 0;
};

class RoutingTable {
 public:
  RoutingTable(NodeId self, std::size_t node_count, Comparator comparator);

  NodeId self() const { return self_; }
  const Comparator& comparator() const { return cmp_; }
  std::uint32_t own_seq() const { return own_seq_; }

  /// Advances our own sequence number by 2 (before each full dump).
  void bump_own_seq(SimTime now);

  std::vector<RouteAdvert> full_dump();
  /// Entries changed since the previous dump.
  std::vector<RouteAdvert> incremental_dump();

  /// Folds a neighbor's advertisement into the table. `link` is the value
  /// of our link to `from`; an unusable link leaves the table untouched.
  /// A candidate replaces the incumbent when its sequence number is newer,
  /// or equal with a strictly better metric.
  UpdateResult apply_update(NodeId from, double link, std::span<const RouteAdvert> entries,
                            SimTime now);

  /// Marks every valid route through `neighbor` broken. Returns how many.
  std::size_t mark_broken_via(NodeId neighbor, SimTime now);
  bool has_active_route_via(NodeId neighbor) const;

  std::optional<NodeId> next_hop(NodeId dest) const;
  const std::optional<RouteEntry>& entry(NodeId dest) const { return rows_.at(dest); }
  std::size_t size() const { return rows_.size(); }

  /// Plain text: one "dest next_hop metric seq time" line per entry.
  void dump(std::ostream& os, SimTime now) const;

 private:
  RouteAdvert advert_of(const RouteEntry& e) const;

  NodeId self_;
  Comparator cmp_;
  std::uint32_t own_seq_ = 0;
  std::vector<std::optional<RouteEntry>> rows_;
};

/// Link values for a static network: `cost(a, b)` is a's cost of the link
/// a→b, or empty if a cannot use it.
using FrozenLinks = std::function<std::optional<double>(NodeId, NodeId)>;

struct FrozenConvergence {
  std::vector<RoutingTable> tables;
  bool converged = false;
  int rounds = 0;
};

/// Runs synchronous DSDV exchange rounds over frozen link values: one
/// sequence-number bump per node, then every node's full dump is delivered
/// to each neighbor able to use the link, until a round changes nothing.
FrozenConvergence converge_frozen(std::size_t node_count, Comparator comparator,
                                  const FrozenLinks& cost, int max_rounds = 1000);

}  // namespace dvsim
