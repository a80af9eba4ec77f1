#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace vhetcs {

// Purpose tags for substreams. Every random quantity in a run is drawn from a
// stream keyed by (master seed, tag, ids...), so changing how one quantity is
// consumed never shifts any other.
enum class StreamTag : std::uint64_t {
  kUePlacement = 1,
  kMobility,
  kDemand,
  kShadowing,
  kEstimationError,
  kExploration,
  kEpisode,
  kInstance,
};

// splitmix64 chain over the path components.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t master, StreamTag tag, std::initializer_list<std::uint64_t> ids);

  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Inclusive on both ends.
  int uniform_int(int lo, int hi);
  double standard_normal();
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace vhetcs
