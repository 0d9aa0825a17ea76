#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace surropt {

// One SplitMix64 step. Used to derive independent stream seeds from a master
// seed; the constants are the reference ones.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Deterministic seed-splitting rule: hash the master seed together with up to
// two stream indices. run_experiment documents this as
// trial_seed = mix_seed(master, strategy_index, trial_index).
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t a,
                              std::uint64_t b = 0) {
  std::uint64_t s = master;
  s = splitmix64(s) ^ (a + 0x9e3779b97f4a7c15ull);
  s = splitmix64(s) ^ (b + 0xd1b54a32d192ed03ull);
  return splitmix64(s);
}

// mt19937_64 engine with pinned sampling helpers. The standard fixes the
// engine's output sequence bit for bit; the helpers below replace the
// implementation-defined std::*_distribution classes so every stochastic
// stream in the library is reproducible from its seed alone.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Unbiased uniform draw from {0, ..., n-1}; n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    std::uint64_t u;
    do {
      u = engine_();
    } while (u < threshold);
    return u % n;
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  // Standard normal, Box-Muller without a cached spare.
  double normal() {
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace surropt
