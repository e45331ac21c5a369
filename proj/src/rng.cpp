#include "shforge/rng.hpp"

#include <cmath>
#include <numbers>

#include "shforge/error.hpp"

namespace shforge {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t seed_combine(uint64_t seed, uint64_t stream) {
  return splitmix64(seed ^ (splitmix64(stream) + 0x9e3779b97f4a7c15ULL +
                            (seed << 6) + (seed >> 2)));
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double Rng::normal(double mean, double stddev) {
  // u1 shifted off zero so the log stays finite.
  const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = uniform();
  const double z =
      std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return mean + stddev * z;
}

double Rng::truncated_normal(double lo, double hi) {
  require(lo < hi, "truncated_normal: empty interval");
  for (;;) {
    const double z = normal();
    if (z >= lo && z <= hi) return z;
  }
}

size_t Rng::index(size_t n) {
  require(n > 0, "Rng::index: empty range");
  const auto k = static_cast<size_t>(uniform() * static_cast<double>(n));
  return k < n ? k : n - 1;
}

}  // namespace shforge
