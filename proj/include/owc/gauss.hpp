#pragma once

#include <cmath>

namespace owc {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

/// Standard normal density.
inline double gauss_phi(double u) { return kInvSqrt2Pi * std::exp(-0.5 * u * u); }

/// Standard normal upper tail, Q(u) = P(X > u).
///
/// Evaluated through erfc so that both tails keep full relative accuracy;
/// 1 - Phi(u) would lose every digit for u beyond a few units.
inline double gauss_Q(double u) { return 0.5 * std::erfc(u * 0.70710678118654752440); }

namespace detail {

/// Beyond this many standard deviations the clipping tails are treated as
/// empty. Q(8) ~ 6e-16, so every clipping moment built from the tails is
/// below double resolution relative to the unclipped quantities.
inline constexpr double kTailCutoff = 8.0;

inline double tail_probability(double a) { return a > kTailCutoff ? 0.0 : gauss_Q(a); }

/// E[(X - a)^+] for X ~ N(0, 1).
inline double tail_first_moment(double a) {
  if (a > kTailCutoff) return 0.0;
  return gauss_phi(a) - a * gauss_Q(a);
}

/// E[((X - a)^+)^2] for X ~ N(0, 1).
inline double tail_second_moment(double a) {
  if (a > kTailCutoff) return 0.0;
  return (1.0 + a * a) * gauss_Q(a) - a * gauss_phi(a);
}

}  // namespace detail
}  // namespace owc
