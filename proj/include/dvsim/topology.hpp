#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "dvsim/time.hpp"

namespace dvsim {

using NodeId = std::uint32_t;
inline constexpr NodeId kBroadcast = std::numeric_limits<NodeId>::max();

struct Position {
  double x = 0.0;
  double y = 0.0;
};

struct Area {
  double width = 0.0;
  double height = 0.0;

  bool operator==(const Area&) const = default;
};

/// Distance-driven channel model.
///
/// Delivery probability is `p_max` out to `inner_range_m`, then falls
/// linearly to zero at `comm_range_m`. Raw bandwidth follows the same shape
/// between `bandwidth_max_bps` and `bandwidth_min_bps`. A fraction of links
/// get one direction scaled by `asymmetry_factor`.
struct LinkModel {
  double comm_range_m = 250.0;
  double inner_range_m = 100.0;
  double p_max = 1.0;
  double bandwidth_max_bps = 11e6;
  double bandwidth_min_bps = 2e6;
  double propagation_delay_s = 1e-6;
  double asymmetry_fraction = 0.0;
  double asymmetry_factor = 0.3;

  double probability_at(double distance) const;
  double bandwidth_at(double distance) const;

  bool operator==(const LinkModel&) const = default;
};

/// One direction of a link whose delivery probability is scaled down.
struct AsymmetricLink {
  NodeId from = 0;
  NodeId to = 0;
  double factor = 1.0;
};

/// Static node placement plus the link model evaluated over it.
/// Immutable after construction.
class Topology {
 public:
  Topology(std::vector<Position> positions, Area area, LinkModel model,
           std::vector<AsymmetricLink> asymmetric = {});

  std::size_t size() const { return positions_.size(); }
  const Area& area() const { return area_; }
  const LinkModel& link_model() const { return model_; }
  const Position& position(NodeId id) const { return positions_.at(id); }
  std::span<const Position> positions() const { return positions_; }
  std::span<const AsymmetricLink> asymmetric_links() const { return asymmetric_; }

  double distance(NodeId a, NodeId b) const;
  bool in_range(NodeId a, NodeId b) const;

  /// Ground-truth probability that a single transmission a→b is received.
  double delivery_probability(NodeId a, NodeId b) const;
  double bandwidth(NodeId a, NodeId b) const;
  SimTime propagation_delay() const { return propagation_; }

  /// Nodes within communication range of `node`, ascending.
  std::span<const NodeId> neighbors(NodeId node) const;

 private:
  std::size_t index(NodeId a, NodeId b) const { return std::size_t{a} * size() + b; }

  std::vector<Position> positions_;
  Area area_;
  LinkModel model_;
  std::vector<AsymmetricLink> asymmetric_;
  SimTime propagation_;
  std::vector<double> probability_;
  std::vector<double> bandwidth_;
  std::vector<std::vector<NodeId>> neighbors_;
};

/// Places `n` nodes uniformly at random in `area`; throws
/// std::invalid_argument for n < 2 or nonpositive dimensions.
Topology build_random_topology(std::size_t n, Area area, const LinkModel& model,
                               std::uint64_t seed);

/// Plain-text record: header keyword lines, then one "id x y" line per node
/// and one "asym from to factor" line per asymmetric direction.
void write_topology(std::ostream& os, const Topology& topology);
Topology read_topology(std::istream& is);

}  // namespace dvsim
