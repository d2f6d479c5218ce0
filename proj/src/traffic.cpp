#include "dvsim/traffic.hpp"

#include <stdexcept>
#include <utility>

#include "dvsim/random.hpp"

namespace dvsim {

std::vector<CbrFlow> start_flows(std::size_t node_count, std::size_t n_pairs, double rate,
                                 std::uint32_t packet_size, SimTime start, SimTime stop,
                                 std::uint64_t seed) {
  if (node_count < 2) throw std::invalid_argument("flows need at least 2 nodes");
  if (n_pairs > node_count * (node_count - 1)) {
    throw std::invalid_argument("more flow pairs requested than ordered node pairs exist");
  }
  if (!(rate >= 1.0)) throw std::invalid_argument("rate must be >= 1");

  std::vector<std::pair<NodeId, NodeId>> pairs;
  pairs.reserve(node_count * (node_count - 1));
  for (NodeId s = 0; s < node_count; ++s) {
    for (NodeId d = 0; d < node_count; ++d) {
      if (s != d) pairs.emplace_back(s, d);
    }
  }
  // Partial Fisher-Yates: the first n_pairs slots are a uniform sample.
  Rng rng = make_stream(seed, 0, Stream::kFlows);
  for (std::size_t i = 0; i < n_pairs; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform01(rng) * (pairs.size() - i));
    std::swap(pairs[i], pairs[j]);
  }

  std::vector<CbrFlow> flows;
  flows.reserve(n_pairs);
  for (std::size_t i = 0; i < n_pairs; ++i) {
    flows.push_back({pairs[i].first, pairs[i].second, rate, packet_size, start, stop});
  }
  return flows;
}

}  // namespace dvsim
