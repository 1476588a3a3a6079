#pragma once

// Poisson sampler: sequential inversion for small means, Hormann's PTRS
// (transformed rejection with squeeze) for mean >= 10. Both consume only
// Rng::uniform draws, so counts are reproducible across platforms.

#include <cmath>
#include <cstdint>

#include "owc/random.hpp"

namespace owc {

inline constexpr double kPoissonInversionLimit = 10.0;

namespace detail {

inline std::uint64_t poisson_inversion(double lambda, Rng& rng) {
  const double u = rng.uniform();
  double p = std::exp(-lambda);
  double cdf = p;
  std::uint64_t k = 0;
  while (u >= cdf) {
    ++k;
    p *= lambda / static_cast<double>(k);
    const double next = cdf + p;
    if (next == cdf) break;  // tail exhausted in double precision
    cdf = next;
  }
  return k;
}

inline std::uint64_t poisson_ptrs(double lambda, Rng& rng) {
  const double slam = std::sqrt(lambda);
  const double loglam = std::log(lambda);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    const double lhs = std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b);
    const double rhs = -lambda + k * loglam - std::lgamma(k + 1.0);
    if (lhs <= rhs) return static_cast<std::uint64_t>(k);
  }
}

}  // namespace detail

inline std::uint64_t poisson(double lambda, Rng& rng) {
  if (!(lambda > 0.0)) return 0;
  return lambda < kPoissonInversionLimit ? detail::poisson_inversion(lambda, rng)
                                         : detail::poisson_ptrs(lambda, rng);
}

}  // namespace owc
