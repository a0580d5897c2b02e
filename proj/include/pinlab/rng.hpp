#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "pinlab/errors.hpp"

namespace pinlab {

// SplitMix64 (Steele, Lea & Flood 2014). Chosen as the project-wide
// generator because it is tiny, fully specified by integer arithmetic and
// therefore bit-reproducible on every platform. Distribution sampling below
// is hand-rolled for the same reason: std::<random> distributions are not
// portable across standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Independent stream for replica `k` of a run seeded with `seed`.
  // The stream state is derived through two scrambling rounds so that
  // adjacent seeds or adjacent stream indices never yield shifted copies
  // of the same sequence.
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t k) {
    std::uint64_t d = SplitMix64(seed).next();
    std::uint64_t e = d ^ (0xBF58476D1CE4E5B9ull * (k + 1));
    return SplitMix64(SplitMix64(e).next());
  }

 private:
  std::uint64_t state_;
};

// Geometric on {1, 2, ...} with success probability c: P(G = g) = c(1-c)^{g-1}.
inline std::int64_t sample_geometric(double c, SplitMix64& rng) {
  require(c > 0.0 && c <= 1.0, ErrorKind::InvalidArgument,
          "geometric parameter must lie in (0, 1]");
  if (c == 1.0) return 1;
  double u = rng.uniform();
  // Inverse transform: G = ceil(log(1-u) / log(1-c)); u = 0 maps to G = 1.
  double g = std::ceil(std::log1p(-u) / std::log1p(-c));
  if (!(g >= 1.0)) g = 1.0;
  const double cap = 4.0e18;  // keep within int64
  if (g > cap) g = cap;
  return static_cast<std::int64_t>(g);
}

// Draws an index from a finite unnormalized mass table via its cumulative
// sums. `cum` must be nondecreasing with cum.back() > 0.
inline std::size_t sample_cumulative(const std::vector<double>& cum,
                                     SplitMix64& rng) {
  double u = rng.uniform() * cum.back();
  std::size_t lo = 0, hi = cum.size() - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (cum[mid] > u)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

}  // namespace pinlab
