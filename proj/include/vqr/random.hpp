#pragma once

// Seeded random draws that are bit-reproducible across standard libraries.
// std::mt19937_64 output is fixed by the standard, but std::*_distribution
// algorithms are not, so the distributions are implemented here.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

namespace vqr {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  // Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  // Uniform integer in [0, n) by rejection, n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
      const std::uint64_t x = engine_();
      if (x < limit) return x % n;
    }
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal, Marsaglia polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  // Poisson by multiplication of uniforms, split into chunks of mean <= 30
  // (sums of independent Poissons are Poisson) to avoid underflow.
  std::uint64_t poisson(double mean) {
    std::uint64_t total = 0;
    while (mean > 0.0) {
      const double chunk = std::min(mean, 30.0);
      mean -= chunk;
      const double limit = std::exp(-chunk);
      double prod = uniform();
      while (prod > limit) {
        ++total;
        prod *= uniform();
      }
    }
    return total;
  }

  std::uint64_t binomial(std::uint64_t n, double p) {
    if (p >= 1.0) return n;
    if (p <= 0.0) return 0;
    std::uint64_t k = 0;
    for (std::uint64_t i = 0; i < n; ++i) k += bernoulli(p) ? 1 : 0;
    return k;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace vqr
