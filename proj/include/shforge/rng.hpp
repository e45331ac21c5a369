#pragma once

#include <cstdint>
#include <random>

namespace shforge {

uint64_t splitmix64(uint64_t x);

/// Derives an independent child seed for a numbered stream. Used to give
/// every clip its own RNG so parallel generation is order-independent.
uint64_t seed_combine(uint64_t seed, uint64_t stream);

/// Seeded generator with pinned distribution transforms. std::*_distribution
/// output is implementation-defined, which would make datasets depend on the
/// standard library version; the transforms here are spelled out instead.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(splitmix64(seed)) {}

  uint64_t next_u64() { return engine_(); }

  double uniform();  // [0, 1)
  double uniform(double lo, double hi);
  double normal(double mean = 0.0, double stddev = 1.0);  // Box-Muller
  double truncated_normal(double lo, double hi);  // unit normal on [lo, hi]
  size_t index(size_t n);  // uniform integer in [0, n)

 private:
  std::mt19937_64 engine_;
};

}  // namespace shforge
