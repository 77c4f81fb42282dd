#pragma once
// Deterministic random streams. mt19937_64 output is standardized bit for
// bit; the Gaussian and Poisson transforms are written out here instead of
// using <random> distributions because those are implementation defined and
// would break seed-reproducibility across standard libraries.
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "cavmag/errors.hpp"

namespace cavmag {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return (eng_() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller, one cached mate per pair.
  double gaussian() {
    if (has_cache_) {
      has_cache_ = false;
      return cache_;
    }
    double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    cache_ = r * std::sin(a);
    has_cache_ = true;
    return r * std::cos(a);
  }

  // Poisson sample; Knuth multiplication below lambda = 50, rounded normal
  // approximation above (error far below the ~sqrt(lambda) scale there).
  long long poisson(double lambda) {
    if (lambda < 0) throw ConfigError("poisson: lambda must be >= 0");
    if (lambda == 0) return 0;
    if (lambda < 50.0) {
      double limit = std::exp(-lambda);
      long long k = 0;
      double p = 1.0;
      do {
        ++k;
        p *= uniform();
      } while (p > limit);
      return k - 1;
    }
    double x = lambda + std::sqrt(lambda) * gaussian();
    return x > 0 ? std::llround(x) : 0;
  }

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  double cache_ = 0.0;
  bool has_cache_ = false;
};

// Wiener increment: N(0, dt). dt must be positive.
inline double wiener_increment(Rng& rng, double dt) {
  if (!(dt > 0)) throw ConfigError("wiener_increment: dt must be > 0");
  return std::sqrt(dt) * rng.gaussian();
}

}  // namespace cavmag
