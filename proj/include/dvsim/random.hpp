#pragma once

#include <cstdint>
#include <random>

namespace dvsim {

/// Named purposes for independent random substreams.
enum class Stream : std::uint32_t {
  kTopology = 1,
  kFlows,
  kChannel,
  kTimers,
  kTraffic,
  kClock,
};

using Rng = std::mt19937_64;

/// Derives an independent generator for (seed, owner, purpose). Every random
/// draw in a run goes through one of these, so results never depend on the
/// order in which different owners consume randomness.
Rng make_stream(std::uint64_t seed, std::uint64_t owner, Stream purpose);

/// Mixes a base seed with an index into a child seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace dvsim
