#pragma once

// Clipping statistics by adaptive Gauss-Kronrod quadrature of their defining
// expectations over the Gaussian density. Slow; used as a reference for the
// closed forms.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>

#include "owc/analytic.hpp"

namespace owc {

namespace detail {

/// The standard normal density underflows beyond this radius.
inline constexpr double kQuadratureRadius = 40.0;

/// E[f(X)] for X ~ N(0, 1), split at the given breakpoints (ascending).
/// Each piece must be smooth; the tolerance is relative to the piece.
inline double gaussian_expectation(const std::function<double(double)>& f,
                                   std::initializer_list<double> breaks) {
  using boost::math::quadrature::gauss_kronrod;
  auto g = [&](double x) { return f(x) * gauss_phi(x); };
  double lo = -kQuadratureRadius, total = 0.0;
  for (double b : breaks) {
    if (b > lo) total += gauss_kronrod<double, 61>::integrate(g, lo, b, 12, 1e-13);
    lo = std::max(lo, b);
  }
  total += gauss_kronrod<double, 61>::integrate(g, lo, kQuadratureRadius, 12, 1e-13);
  return total;
}

}  // namespace detail

/// DCO statistics of C(y + B) from their definitions: K = E[v C(v)] / E[v^2],
/// mu = E[C(v) - K v], sigma2 = Var[C(v) - K v], beta = E[C(v)] - B with
/// v = y + B. The clipping residue C(v) - v is integrated separately so the
/// small quantities keep their relative accuracy.
inline ClipStats clip_stats_dco_quadrature(double eps_bias, double eps_top, double sigma_y) {
  const double a = -eps_bias, b = eps_top - eps_bias;
  auto v = [&](double x) { return x + eps_bias; };
  auto residue = [&](double x) {
    const double u = v(x);
    return u < 0.0 ? -u : (u > eps_top ? eps_top - u : 0.0);
  };
  const double e_vv = detail::gaussian_expectation([&](double x) { return v(x) * v(x); }, {a, b});
  const double e_vd = detail::gaussian_expectation([&](double x) { return v(x) * residue(x); }, {a, b});
  const double one_minus_k = -e_vd / e_vv;
  const double e_d = detail::gaussian_expectation(residue, {a, b});
  auto noise = [&](double x) { return residue(x) + one_minus_k * v(x); };
  const double mu = detail::gaussian_expectation(noise, {a, b});
  const double m2 = detail::gaussian_expectation([&](double x) { return noise(x) * noise(x); }, {a, b});
  return {Scheme::DCO, 1.0 - one_minus_k, sigma_y * mu, sigma_y * sigma_y * (m2 - mu * mu),
          sigma_y * e_d};
}

/// ACO statistics of C(y) relative to the half-wave signal y^+:
/// K = E[y C(y)] / E[y y^+], mu = E[C(y) - K y^+], sigma2 = Var[C(y) - K y^+],
/// beta = E[C(y)] - E[y^+].
inline ClipStats clip_stats_aco_quadrature(double eps_top, double sigma_y) {
  auto pos = [](double x) { return x > 0.0 ? x : 0.0; };
  auto residue = [&](double x) { return x > eps_top ? eps_top - x : 0.0; };
  const double e_yp = detail::gaussian_expectation([&](double x) { return x * pos(x); }, {0.0, eps_top});
  const double e_yd = detail::gaussian_expectation([&](double x) { return x * residue(x); }, {0.0, eps_top});
  const double one_minus_k = -e_yd / e_yp;
  const double e_d = detail::gaussian_expectation(residue, {0.0, eps_top});
  auto noise = [&](double x) { return residue(x) + one_minus_k * pos(x); };
  const double mu = detail::gaussian_expectation(noise, {0.0, eps_top});
  const double m2 = detail::gaussian_expectation([&](double x) { return noise(x) * noise(x); }, {0.0, eps_top});
  return {Scheme::ACO, 1.0 - one_minus_k, sigma_y * mu, sigma_y * sigma_y * (m2 - mu * mu),
          sigma_y * e_d};
}

}  // namespace owc
