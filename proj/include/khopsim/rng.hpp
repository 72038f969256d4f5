#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace khopsim {

// All randomness in the library flows through these helpers. std::mt19937_64
// output is fully specified by the standard, and the transforms below avoid
// std::*_distribution (whose algorithms are implementation-defined), so a
// given seed produces the same stream on every platform.

using RngEngine = std::mt19937_64;

inline RngEngine make_engine(std::uint64_t seed) { return RngEngine(seed); }

/// splitmix64 finalizer; used to derive independent substream seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(RngEngine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Unbiased uniform integer in [0, bound). bound must be > 0.
inline std::uint64_t uniform_below(RngEngine& rng, std::uint64_t bound) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

/// Fisher-Yates shuffle driven by uniform_below.
template <typename T>
void shuffle_in_place(std::vector<T>& items, RngEngine& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

/// Standard-normal sampler (Box-Muller, no rejection). Caches the second
/// variate so consecutive calls consume the engine at a fixed rate.
class GaussianSampler {
 public:
  explicit GaussianSampler(RngEngine& rng) : rng_(rng) {}

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so the log is finite.
    const double u1 = 1.0 - uniform_unit(rng_);
    const double u2 = uniform_unit(rng_);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  RngEngine& rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace khopsim
