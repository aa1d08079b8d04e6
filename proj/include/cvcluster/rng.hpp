#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace cvcluster {

/**
 * Seeded RNG with platform-independent draws.
 *
 * std::mt19937_64 is fully specified by the standard; the helpers below avoid
 * std::uniform_real_distribution etc., whose output is implementation-defined,
 * so reports produced with a fixed seed are reproducible everywhere.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /** Uniform in [0, 1). */
  double uniform() { return std::ldexp(static_cast<double>(gen_() >> 11), -53); }

  /** Uniform in [lo, hi). */
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /** Uniform integer in [0, n). Requires n > 0. */
  std::uint64_t below(std::uint64_t n) {
    // Rejection sampling keeps the draw unbiased and deterministic.
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / n * n;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % n;
  }

  int below_int(int n) { return static_cast<int>(below(static_cast<std::uint64_t>(n))); }

  bool coin() { return (gen_() & 1u) != 0; }

  /** Standard normal via Box-Muller. */
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  std::mt19937_64& raw() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace cvcluster
