#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace teichlab {

// Seeded generator used by every experiment: std::mt19937_64 with seeds
// expanded through splitmix64. Substreams are derived from (seed, index) so a
// sweep gives the same numbers for a work unit whatever thread runs it.
//
// Distributions are implemented here rather than through <random> adaptors,
// whose output is allowed to differ between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  static Rng substream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  // Standard normal via Box-Muller (no cached second value, so state stays
  // fully described by the engine).
  double normal();

  // Textual engine state; restore() reproduces the stream exactly.
  std::string serialize() const;
  static Rng restore(const std::string& state);

 private:
  Rng() = default;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace teichlab
