#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "owc/gauss.hpp"
#include "owc/types.hpp"

namespace owc {

struct MomentFit {
  double mean = 0.0;
  double variance = 0.0;  ///< unbiased
};

inline MomentFit gaussian_moment_fit(const std::vector<double>& x) {
  if (x.size() < 2) throw std::invalid_argument("gaussian_moment_fit: need at least 2 samples");
  const double n = static_cast<double>(x.size());
  double m = 0.0;
  for (double v : x) m += v;
  m /= n;
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return {m, ss / (n - 1.0)};
}

struct DensityEstimate {
  std::vector<double> grid;
  std::vector<double> density;
  double bandwidth = 0.0;
  MomentFit moment_fit;

  double fitted_density(std::size_t i) const {
    const double sd = std::sqrt(moment_fit.variance);
    return gauss_phi((grid[i] - moment_fit.mean) / sd) / sd;
  }
  double peak() const { return *std::max_element(density.begin(), density.end()); }
  /// sup |kde - fitted Gaussian| over the grid.
  double sup_distance() const {
    double d = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      d = std::max(d, std::abs(density[i] - fitted_density(i)));
    return d;
  }
  double integral() const {
    double s = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i)
      s += 0.5 * (density[i] + density[i - 1]) * (grid[i] - grid[i - 1]);
    return s;
  }
};

inline constexpr std::size_t kKdeGridPoints = 401;
inline constexpr double kKdeKernelReach = 8.0;  ///< kernel truncated at this many bandwidths

/// Silverman's rule: 0.9 min(sd, IQR / 1.34) n^(-1/5).
inline double silverman_bandwidth(std::vector<double> x) {
  const auto fit = gaussian_moment_fit(x);
  std::sort(x.begin(), x.end());
  auto quant = [&](double q) {
    const double pos = q * static_cast<double>(x.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    const double f = pos - static_cast<double>(i);
    return i + 1 < x.size() ? x[i] * (1.0 - f) + x[i + 1] * f : x[i];
  };
  const double iqr = quant(0.75) - quant(0.25);
  double spread = std::sqrt(fit.variance);
  if (iqr > 0.0) spread = std::min(spread, iqr / 1.34);
  return 0.9 * spread * std::pow(static_cast<double>(x.size()), -0.2);
}

/// Gaussian-kernel density estimate on mean +- 5 sd.
inline DensityEstimate kde(const std::vector<double>& samples,
                           std::optional<double> bandwidth = std::nullopt) {
  if (samples.size() < 100) throw std::invalid_argument("kde: need at least 100 samples");
  DensityEstimate est;
  est.moment_fit = gaussian_moment_fit(samples);
  const double sd = std::sqrt(est.moment_fit.variance);
  if (!(sd > 0.0)) throw std::invalid_argument("kde: samples have zero variance");
  est.bandwidth = bandwidth ? *bandwidth : silverman_bandwidth(samples);
  if (!(est.bandwidth > 0.0)) throw std::invalid_argument("kde: bandwidth must be positive");

  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  const double lo = est.moment_fit.mean - 5.0 * sd, hi = est.moment_fit.mean + 5.0 * sd;
  const double h = est.bandwidth;
  const double norm = 1.0 / (static_cast<double>(samples.size()) * h);
  est.grid.resize(kKdeGridPoints);
  est.density.resize(kKdeGridPoints);
  for (std::size_t i = 0; i < kKdeGridPoints; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(kKdeGridPoints - 1);
    const auto first = std::lower_bound(sorted.begin(), sorted.end(), x - kKdeKernelReach * h);
    const auto last = std::upper_bound(first, sorted.end(), x + kKdeKernelReach * h);
    double s = 0.0;
    for (auto it = first; it != last; ++it) s += gauss_phi((x - *it) / h);
    est.grid[i] = x;
    est.density[i] = s * norm;
  }
  return est;
}

struct ReImCovariance {
  double correlation = 0.0;
  double covariance = 0.0;  ///< unbiased
};

/// Sample covariance of real and imaginary parts, and its normalisation by
/// the two standard deviations.
inline ReImCovariance reim_covariance(const std::vector<cplx>& e) {
  if (e.size() < 1000) throw std::invalid_argument("reim_covariance: need at least 1000 samples");
  const double n = static_cast<double>(e.size());
  double mr = 0.0, mi = 0.0;
  for (const auto& v : e) mr += v.real(), mi += v.imag();
  mr /= n;
  mi /= n;
  double srr = 0.0, sii = 0.0, sri = 0.0;
  for (const auto& v : e) {
    const double a = v.real() - mr, b = v.imag() - mi;
    srr += a * a;
    sii += b * b;
    sri += a * b;
  }
  if (!(srr > 0.0) || !(sii > 0.0)) throw std::invalid_argument("reim_covariance: zero variance");
  return {sri / std::sqrt(srr * sii), sri / (n - 1.0)};
}

/// Correlation from accumulated second moments (unbiased variances and covariance).
inline double correlation_from_moments(double var_re, double var_im, double cov) {
  if (!(var_re > 0.0) || !(var_im > 0.0)) throw std::invalid_argument("zero variance");
  return cov / std::sqrt(var_re * var_im);
}

}  // namespace owc
