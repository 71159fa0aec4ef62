#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

// Reproducibility layer. std::mt19937_64's output sequence is pinned by the
// standard, but the std <random> distributions are not, so every transform
// from engine words to usable numbers is spelled out here.
namespace swb {

// SplitMix64 finalizer. Full-avalanche 64-bit mix used for sub-seed derivation.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Independent stream seeds are derived by chaining: each derivation step is
// mix64(base ^ mix64(salt)), so permuting or extending one coordinate never
// collides streams of another.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
  return mix64(base ^ mix64(salt));
}

inline std::uint64_t double_bits(double v) { return std::bit_cast<std::uint64_t>(v); }

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // Uniform double in [0, 1), 53 random mantissa bits.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  // Uniform integer in [0, n), n >= 1. Mask-and-reject keeps the mapping
  // portable (no implementation-defined modulo bias tricks).
  std::uint64_t bounded(std::uint64_t n) {
    std::uint64_t mask = n - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    std::uint64_t v;
    do {
      v = eng_() & mask;
    } while (v >= n);
    return v;
  }

  // Box-Muller, cosine branch only; one engine pair consumed per call.
  double gaussian(double mean, double sigma) {
    if (sigma == 0.0) return mean;
    double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    double u2 = uniform01();
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    return mean + sigma * z;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace swb
