#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "owc/analytic.hpp"
#include "owc/fft.hpp"
#include "owc/random.hpp"

namespace owc {

/// Subcarrier loading x_k = s_k w_k of one OFDM symbol.
struct FrequencyFrame {
  Scheme scheme = Scheme::DCO;
  std::vector<cplx> x;
};

/// Time-domain symbol before and after clipping.
struct TimeFrame {
  std::vector<double> y;
  std::vector<double> y_hat;
  double bias = 0.0;
  double peak = 0.0;
};

enum class Constellation { Qam4, ComplexGaussian };

inline std::string_view to_string(Constellation c) {
  return c == Constellation::Qam4 ? "qam4" : "gaussian";
}

inline Constellation parse_constellation(std::string_view name) {
  if (name == "qam4" || name == "4qam" || name == "QAM4") return Constellation::Qam4;
  if (name == "gaussian") return Constellation::ComplexGaussian;
  throw std::invalid_argument("unknown constellation '" + std::string(name) + "'");
}

/// Unit-energy symbol: (+-1 +-j)/sqrt(2), or a circular complex Gaussian.
inline cplx draw_symbol(Constellation c, Rng& rng) {
  constexpr double h = 0.70710678118654752440;
  if (c == Constellation::Qam4) {
    const std::uint64_t b = rng.bits();
    return {(b & 1) ? h : -h, (b & 2) ? h : -h};
  }
  const double re = rng.normal();
  return {h * re, h * rng.normal()};
}

inline FrequencyFrame make_frame(const WaveformConfig& wf, Constellation c, Rng& rng) {
  FrequencyFrame f{wf.scheme, std::vector<cplx>(wf.N)};
  for (std::size_t i = 0; i < wf.weights.size(); ++i) {
    const std::size_t k = wf.subcarrier(i);
    const cplx v = draw_symbol(c, rng) * wf.weights[i];
    f.x[k] = v;
    f.x[wf.N - k] = std::conj(v);
  }
  return f;
}

inline bool is_hermitian(const std::vector<cplx>& x, double tol) {
  const std::size_t n = x.size();
  if (std::abs(x[0].imag()) > tol || std::abs(x[n / 2].imag()) > tol) return false;
  for (std::size_t k = 1; k < n / 2; ++k)
    if (std::abs(x[n - k] - std::conj(x[k])) > tol) return false;
  return true;
}

/// y_n = sum_k x_k e^{j 2 pi k n / N}, no 1/N.
inline std::vector<double> modulate(const FrequencyFrame& frame, const FourierPlan& plan) {
  double scale = 0.0;
  for (const auto& v : frame.x) scale = std::max(scale, std::abs(v));
  if (!is_hermitian(frame.x, 1e-12 * std::max(scale, 1.0)))
    throw std::invalid_argument("modulate: frame is not Hermitian symmetric");
  std::vector<cplx> buf = frame.x;
  plan.inverse_unscaled(buf);
  std::vector<double> y(buf.size());
  for (std::size_t n = 0; n < buf.size(); ++n) y[n] = buf[n].real();
  return y;
}

inline std::vector<double> modulate(const FrequencyFrame& frame) {
  return modulate(frame, FourierPlan(frame.x.size()));
}

/// y_hat = min(max(y + B, 0), y_max) with B = eps_bias sigma_y, y_max = eps_top sigma_y.
inline TimeFrame clip_dco(const std::vector<double>& y, double eps_bias, double eps_top,
                          double sigma_y) {
  TimeFrame t{y, std::vector<double>(y.size()), eps_bias * sigma_y, eps_top * sigma_y};
  for (std::size_t n = 0; n < y.size(); ++n) t.y_hat[n] = std::clamp(y[n] + t.bias, 0.0, t.peak);
  return t;
}

/// y_hat = min(max(y, 0), y_max) with y_max = eps_top sigma_y.
inline TimeFrame clip_aco(const std::vector<double>& y, double eps_top, double sigma_y) {
  TimeFrame t{y, std::vector<double>(y.size()), 0.0, eps_top * sigma_y};
  for (std::size_t n = 0; n < y.size(); ++n) t.y_hat[n] = std::clamp(y[n], 0.0, t.peak);
  return t;
}

inline TimeFrame clip(const WaveformConfig& wf, const std::vector<double>& y) {
  return wf.scheme == Scheme::DCO ? clip_dco(y, wf.eps_bias, wf.eps_top, wf.sigma_y())
                                  : clip_aco(y, wf.eps_top, wf.sigma_y());
}

/// Spectrum of d_n = |y_n| / 2, the even part of the half-wave rectified
/// signal: D_k = (1/N) sum_n d_n e^{-j 2 pi n k / N}. For antisymmetric y
/// (y_n = -y_{n+N/2}) d is N/2-periodic, so D vanishes on odd k.
inline std::vector<cplx> dk_spectrum(const std::vector<double>& y, double tol = 1e-10) {
  const std::size_t n = y.size();
  if (!is_power_of_two(n)) throw std::invalid_argument("dk_spectrum: length must be a power of two");
  double scale = 0.0;
  for (double v : y) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < n / 2; ++i)
    if (std::abs(y[i] + y[i + n / 2]) > tol * std::max(scale, 1e-300))
      throw std::invalid_argument("dk_spectrum: signal is not antisymmetric at n=" +
                                  std::to_string(i));
  std::vector<cplx> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = 0.5 * std::abs(y[i]);
  FourierPlan(n).forward(d);
  return d;
}

}  // namespace owc
