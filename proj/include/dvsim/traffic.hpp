#pragma once

#include <cstdint>
#include <vector>

#include "dvsim/time.hpp"
#include "dvsim/topology.hpp"

namespace dvsim {

/// Constant-bit-rate flow.
struct CbrFlow {
  NodeId src = 0;
  NodeId dst = 0;
  double rate = 1.0;  // packets per second
  std::uint32_t packet_size = 640;
  SimTime start;
  SimTime stop;
};

/// Draws `n_pairs` distinct ordered (src, dst) pairs uniformly without
/// replacement. Throws std::invalid_argument if n_pairs > N(N-1) or the
/// rate is below 1 packet/s.
std::vector<CbrFlow> start_flows(std::size_t node_count, std::size_t n_pairs, double rate,
                                 std::uint32_t packet_size, SimTime start, SimTime stop,
                                 std::uint64_t seed);

}  // namespace dvsim
