#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace spe {

/// Seedable random source used by every stochastic routine.
///
/// The engine is std::mt19937_64. Independent streams for parallel chains
/// are derived with `Rng::stream(seed, index)`, which feeds (seed, index)
/// through splitmix64 so that neighbouring indices give unrelated states.
class Rng {
 public:
  using engine_type = std::mt19937_64;

  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    return Rng(mix(seed ^ mix(index + 0x632be59bd9b4e019ULL)));
  }

  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  /// Uniform real in [0, 1).
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

  engine_type& engine() { return engine_; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  engine_type engine_;
};

}  // namespace spe
