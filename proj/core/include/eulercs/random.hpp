#pragma once

#include <cstdint>
#include <random>

namespace eulercs {

// SplitMix64 finaliser of (master, stream): independent, replayable seeds for
// per-trial substreams derived from a single master seed.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream) noexcept;

/// Seeded generator with platform-independent output.
///
/// The engine is std::mt19937_64, whose sequence the standard fixes. The
/// standard distributions are implementation-defined, so uniform, bounded
/// and normal draws are derived here explicitly (53-bit uniforms, rejection
/// for bounded integers, Box-Muller for normals).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  // Uniform in [0, 1).
  double uniform();
  // Uniform integer in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);
  // Standard normal.
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace eulercs
