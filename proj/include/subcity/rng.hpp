#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

namespace subcity {

// Deterministic 64-bit generator (splitmix64). Used in place of <random>
// engines/distributions so that seeded outputs are byte-identical across
// standard library implementations.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53 bits of precision.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound). Modulo bias is negligible for the small
  // bounds used here and keeps the mapping fully specified.
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

 private:
  std::uint64_t state_;
};

// Stable derivation of per-task seeds from a root seed and salts.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0) {
  SplitMix64 s(a);
  std::uint64_t h = s.next() ^ (b + 0x9E3779B97F4A7C15ull);
  SplitMix64 t(h);
  h = t.next() ^ (c + 0xBF58476D1CE4E5B9ull);
  SplitMix64 u(h);
  return u.next();
}

template <typename T>
void deterministic_shuffle(std::vector<T>& values, SplitMix64& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(values[i - 1], values[j]);
  }
}

// 1 + Poisson(mean) via Knuth's product method; keeps commuter counts >= 1.
inline std::int64_t one_shifted_poisson(double mean, SplitMix64& rng) {
  if (mean <= 0.0) return 1;
  const double limit = std::exp(-mean);
  double product = 1.0;
  std::int64_t k = 0;
  do {
    ++k;
    product *= rng.uniform01();
  } while (product > limit);
  return k;  // 1 + Poisson(mean)
}

// Standard normal via Box-Muller.
inline double standard_normal(SplitMix64& rng) {
  const double u1 = 1.0 - rng.uniform01();  // (0, 1]
  const double u2 = rng.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace subcity
