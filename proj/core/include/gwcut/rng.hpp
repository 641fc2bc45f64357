#pragma once

#include <array>
#include <cstdint>

namespace gwcut {

// Pinned 64-bit generator: xoshiro256** seeded through SplitMix64. The
// standard <random> distributions are implementation-defined, so every
// variate used by the library is derived here to keep seeds reproducible
// across platforms and standard libraries.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0);

  // Independent stream for sub-task `index` of a computation seeded by `seed`.
  static Rng derive(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next();
  std::uint64_t operator()() { return next(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on [lo, hi).
  double uniform(double lo, double hi);
  // Uniform integer on [0, bound), bound > 0, without modulo bias.
  std::uint64_t below(std::uint64_t bound);
  bool coin() { return (next() >> 63) != 0; }

 private:
  std::array<std::uint64_t, 4> s_{};
};

std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace gwcut
