#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace blockfit {

// SplitMix64 (Steele/Lea/Vigna): a counter-based 64-bit generator. The state
// walks an arithmetic sequence with the golden-ratio gamma and each output is
// a finalizer hash of the state, so output i from seed s is
// finalize(s + (i+1)*GAMMA) — streams can be positioned or split freely and
// behave identically on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr std::uint64_t GAMMA = 0x9E3779B97F4A7C15ull;

  static std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Independent substream: hash the (seed, tag) pair through the finalizer.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t tag) {
    return finalize(seed ^ finalize(tag * 0xD1B54A32D192ED03ull + GAMMA));
  }

  std::uint64_t next_u64() { return finalize(state_ += GAMMA); }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Unbiased uniform integer in [0, bound) via rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % bound;
  }

  bool bernoulli(double p) { return next_double() < p; }

  // Index draw from a probability vector (CDF scan; last index absorbs
  // floating-point slack).
  int categorical(const std::vector<double>& probs) {
    double u = next_double();
    double acc = 0.0;
    for (size_t k = 0; k + 1 < probs.size(); ++k) {
      acc += probs[k];
      if (u < acc) return static_cast<int>(k);
    }
    return static_cast<int>(probs.size()) - 1;
  }

  // Number of failures before the next success of a Bernoulli(p) sequence;
  // used by the sparse samplers to skip non-edges in O(1).
  std::uint64_t geometric_skip(double p) {
    if (p >= 1.0) return 0;
    double u = next_double();
    // floor(log(1-u)/log(1-p)); log1p keeps precision for small p.
    double g = std::floor(std::log1p(-u) / std::log1p(-p));
    if (g < 0) g = 0;
    if (g > 9.2e18) return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(g);
  }

 private:
  std::uint64_t state_;
};

}  // namespace blockfit
