#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace csi {

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Derives the seed for stream `label` of a master seed. Documented so runs
/// are reproducible across implementations: seed' = splitmix64(master ^ splitmix64(label)).
constexpr std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t label) {
  return splitmix64(master ^ splitmix64(label));
}

/// Seeded generator: mt19937_64 for bits, Box-Muller for normals.
/// The identity string is recorded in output headers/manifests so results
/// can be reproduced from the seed alone.
class Rng {
 public:
  static constexpr const char* kIdentity = "mt19937_64+box-muller";

  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform on (0,1]; never returns 0 so log() is safe.
  double uniform() {
    return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; generates pairs, caches the second.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
  }

  /// Unbiased integer in [0, bound) by rejection.
  std::uint64_t integer(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r;
    do {
      r = gen_();
    } while (r >= limit);
    return r % bound;
  }

 private:
  std::mt19937_64 gen_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace csi
