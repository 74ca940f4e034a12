#pragma once

// Seedable, splittable pseudo-random streams.
//
// Rng is xoshiro256** seeded through SplitMix64. Rng::stream(seed, index)
// derives an independent stream for a given index, which is how observation
// i of a sample set gets its randomness: the draw for index i never depends
// on how many other indices were drawn, or in which order, so parallel and
// sequential generation agree bit for bit and a sample set of size N is a
// prefix of the one of size N' > N.
//
// All distributions are implemented here rather than taken from <random>
// so that outputs do not depend on the standard library vendor.

#include <array>
#include <cstdint>
#include <span>

namespace csls {

std::uint64_t splitmix64(std::uint64_t& state);
/// Stateless mix of two words, used to key streams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  static Rng stream(std::uint64_t seed, std::uint64_t index) { return Rng(mix_seed(seed, index)); }

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on {0, ..., n-1}, unbiased (Lemire's multiply-and-reject).
  std::uint64_t uniform_index(std::uint64_t n);
  /// Standard normal via the Box-Muller transform.
  double normal();

 private:
  std::array<std::uint64_t, 4> s_{};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace csls
