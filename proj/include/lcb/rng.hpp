#pragma once

#include <cstdint>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace lcb {

// Deterministic random stream. The engine is std::mt19937_64 (whose raw output
// is pinned by the standard); all distributions are hand-rolled on top of it so
// that a given seed produces the same draws on every platform and compiler.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Index in [0, n), rejection-sampled to avoid modulo bias.
  std::size_t uniform_index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n must be > 0");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % n);
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // Standard normal via Box-Muller; caches the second deviate.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  // Inverse-CDF draw from a nonnegative weight vector. Cumulative sums are
  // accumulated in long double so near-zero probabilities resolve stably.
  std::size_t categorical(const std::vector<double>& weights) {
    long double total = 0.0L;
    for (double w : weights) total += static_cast<long double>(w < 0.0 ? 0.0 : w);
    if (!(total > 0.0L)) throw std::invalid_argument("categorical: weights sum to zero");
    const long double u = static_cast<long double>(uniform01()) * total;
    long double cum = 0.0L;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      cum += static_cast<long double>(weights[i] < 0.0 ? 0.0 : weights[i]);
      if (u < cum) return i;
    }
    return weights.size() - 1;
  }

  // Independent child stream keyed by (construction seed, stream_id).
  Rng derive(std::uint64_t stream_id) const {
    return Rng(splitmix64(seed_ ^ (0x9E3779B97F4A7C15ULL * (stream_id + 1))));
  }

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace lcb
