#pragma once

// Closed-form clipping statistics and per-subcarrier SNR of photon-counting
// DCO-OFDM and ACO-OFDM links.
//
// All clipping moments are written in terms of the partial tail moments
// E[(X-a)^+] and E[((X-a)^+)^2] of a standard normal X. The quantities that
// vanish without clipping (1-K, mu, sigma^2, beta) are then sums of small
// terms instead of differences of O(1) terms, so they keep their relative
// accuracy deep into the no-clipping regime.

#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "owc/gauss.hpp"
#include "owc/types.hpp"

namespace owc {

/// Bussgang decomposition of the clipped waveform, C(y) = K y + n_c.
struct ClipStats {
  Scheme scheme;
  double K;       ///< Bussgang scale factor.
  double mu;      ///< E[n_c], optical power units.
  double sigma2;  ///< Var[n_c], optical power squared.
  double beta;    ///< Mean optical power added by clipping, E[C(y)] - E[y before clipping].
};

/// Statistics of DC-biased, double-sided clipping C(y + B) with
/// C(v) = min(max(v, 0), y_max), B = eps_bias sigma_y, y_max = eps_top sigma_y.
inline ClipStats clip_stats_dco(double eps_bias, double eps_top, double sigma_y) {
  if (!(eps_bias > 0.0) || !std::isfinite(eps_bias))
    throw std::invalid_argument("clip_stats_dco: bias level must be positive and finite");
  if (!(eps_top > eps_bias))
    throw std::invalid_argument("clip_stats_dco: top level must exceed bias level");
  if (!(sigma_y > 0.0)) throw std::invalid_argument("clip_stats_dco: sigma_y must be positive");

  // Normalised biased signal u = eps_bias + X; clipping residue d = C(u) - u.
  const double below = eps_bias;           // distance to the zero floor
  const double above = eps_top - eps_bias;  // distance to the peak
  const double lo1 = detail::tail_first_moment(below);
  const double lo2 = detail::tail_second_moment(below);
  const double hi1 = detail::tail_first_moment(above);
  const double hi2 = detail::tail_second_moment(above);
  const double energy = 1.0 + eps_bias * eps_bias;  // E[u^2]

  // E[u d] = -(lo2 + hi2 + eps_top hi1), E[d] = lo1 - hi1, E[d^2] = lo2 + hi2.
  const double one_minus_k = (lo2 + hi2 + eps_top * hi1) / energy;
  const double mean_d = lo1 - hi1;
  const double mu = one_minus_k * eps_bias + mean_d;
  const double var = lo2 + hi2 - one_minus_k * one_minus_k * energy - mu * mu;

  return {Scheme::DCO, 1.0 - one_minus_k, sigma_y * mu,
          sigma_y * sigma_y * std::max(var, 0.0), sigma_y * mean_d};
}

/// Statistics of ACO clipping: the antisymmetric signal is floored at zero and
/// capped at y_max = eps_top sigma_y. The decomposition is taken relative to
/// the half-wave rectified signal y^+.
inline ClipStats clip_stats_aco(double eps_top, double sigma_y) {
  if (!(eps_top > 0.0)) throw std::invalid_argument("clip_stats_aco: top level must be positive");
  if (!(sigma_y > 0.0)) throw std::invalid_argument("clip_stats_aco: sigma_y must be positive");
  const double q = detail::tail_probability(eps_top);
  const double t1 = detail::tail_first_moment(eps_top);
  const double t2 = detail::tail_second_moment(eps_top);
  const double one_minus_k = 2.0 * q;
  const double mu = one_minus_k * kInvSqrt2Pi - t1;
  const double var = t2 - 2.0 * q * q - mu * mu;
  return {Scheme::ACO, 1.0 - one_minus_k, sigma_y * mu,
          sigma_y * sigma_y * std::max(var, 0.0), -sigma_y * t1};
}

// ---------------------------------------------------------------------------

/// Transmit waveform: scheme, size, and data-subcarrier weights.
///
/// `weights` holds one entry per data subcarrier, in increasing k:
/// DCO carries k = 1..N/2-1, ACO carries the odd k = 1, 3, .., N/2-1.
/// The Hermitian mirrors N-k inherit the same weight, so
/// sigma_y^2 = 2 sum(weights^2).
struct WaveformConfig {
  Scheme scheme = Scheme::DCO;
  std::size_t N = 64;
  std::vector<double> weights;
  double eps_bias = 0.0;  ///< DCO only.
  double eps_top = 0.0;

  static std::size_t data_count(Scheme s, std::size_t n) {
    return s == Scheme::DCO ? n / 2 - 1 : n / 4;
  }

  static WaveformConfig uniform(Scheme s, std::size_t n, double w, double eps_bias,
                                double eps_top) {
    return {s, n, std::vector<double>(data_count(s, n), w), eps_bias, eps_top};
  }

  /// Builds a config from absolute levels (bias and peak in power units).
  static WaveformConfig from_levels(Scheme s, std::size_t n, std::vector<double> w,
                                    double bias, double peak) {
    WaveformConfig cfg{s, n, std::move(w), 0.0, 0.0};
    const double sy = cfg.sigma_y();
    if (!(sy > 0.0)) throw std::invalid_argument("from_levels: all weights are zero");
    cfg.eps_bias = s == Scheme::DCO ? bias / sy : 0.0;
    cfg.eps_top = peak / sy;
    return cfg;
  }

  std::size_t subcarrier(std::size_t i) const {
    return scheme == Scheme::DCO ? i + 1 : 2 * i + 1;
  }

  std::vector<std::size_t> data_subcarriers() const {
    std::vector<std::size_t> ks(data_count(scheme, N));
    for (std::size_t i = 0; i < ks.size(); ++i) ks[i] = subcarrier(i);
    return ks;
  }

  /// Weight on any subcarrier 0..N-1, mirrors included.
  double weight(std::size_t k) const {
    if (k == 0 || k == N / 2 || k >= N) return 0.0;
    const std::size_t base = k < N / 2 ? k : N - k;
    if (scheme == Scheme::DCO) return weights[base - 1];
    return base % 2 == 1 ? weights[(base - 1) / 2] : 0.0;
  }

  double sigma_y() const {
    double s = 0.0;
    for (double w : weights) s += w * w;
    return std::sqrt(2.0 * s);
  }
  double bias() const { return scheme == Scheme::DCO ? eps_bias * sigma_y() : 0.0; }
  double peak() const { return eps_top * sigma_y(); }

  void validate() const {
    if (!is_power_of_two(N) || N < 8) throw std::invalid_argument("N must be a power of two >= 8");
    if (weights.size() != data_count(scheme, N))
      throw std::invalid_argument("expected " + std::to_string(data_count(scheme, N)) +
                                  " data-subcarrier weights for " + std::string(to_string(scheme)) +
                                  " with N=" + std::to_string(N));
    for (double w : weights)
      if (!(w >= 0.0) || !std::isfinite(w))
        throw std::invalid_argument("weights must be finite and nonnegative");
    if (scheme == Scheme::DCO && !(eps_bias > 0.0 && eps_bias < eps_top))
      throw std::invalid_argument("DCO requires 0 < eps_bias < eps_top");
    if (!(eps_top > 0.0)) throw std::invalid_argument("eps_top must be positive");
  }
};

/// Photon-counting channel seen by the receiver.
struct ChannelConfig {
  double alpha = 0.0;     ///< Photons per unit optical energy per symbol.
  double lambda_b = 0.0;  ///< Background and dark counts per symbol.
  std::vector<cplx> gains;

  double dc_gain() const { return gains.at(0).real(); }

  void validate(std::size_t n) const {
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
      throw std::invalid_argument("alpha must be finite and nonnegative");
    if (!(lambda_b >= 0.0)) throw std::invalid_argument("lambda_b must be nonnegative");
    if (gains.size() != n)
      throw std::invalid_argument("expected " + std::to_string(n) + " subcarrier gains, got " +
                                  std::to_string(gains.size()));
    if (gains[0].imag() != 0.0 || !(gains[0].real() > 0.0))
      throw std::invalid_argument("g_0 must be real and positive");
    for (std::size_t k = 1; k < n; ++k) {
      const cplx d = gains[n - k] - std::conj(gains[k]);
      if (std::abs(d) > 1e-12 * std::abs(gains[k]))
        throw std::invalid_argument("gains are not Hermitian at k=" + std::to_string(k));
    }
  }
};

inline constexpr double kPlanck = 6.62607015e-34;
inline constexpr double kLightSpeed = 299792458.0;

/// alpha = tau / (h nu) with tau = 1 / symbol_rate.
inline double alpha_from_wavelength(double wavelength_m, double symbol_rate) {
  if (!(wavelength_m > 0.0) || !(symbol_rate > 0.0))
    throw std::invalid_argument("wavelength and symbol rate must be positive");
  return (1.0 / symbol_rate) / (kPlanck * kLightSpeed / wavelength_m);
}

/// Per-subcarrier analysis result. `snr_empirical` is negative until a
/// simulation fills it in.
struct SubcarrierReport {
  std::size_t k = 0;
  double snr_analytic = 0.0;
  double snr_empirical = -1.0;
  double rate = 0.0;
};

inline ClipStats clip_stats(const WaveformConfig& wf) {
  return wf.scheme == Scheme::DCO ? clip_stats_dco(wf.eps_bias, wf.eps_top, wf.sigma_y())
                                  : clip_stats_aco(wf.eps_top, wf.sigma_y());
}

/// Signal-independent part of the received photon mean,
/// alpha g_0 E[C(y)] + lambda_b, i.e. the Poisson-plus-background floor.
inline double photon_floor(const ClipStats& stats, const ChannelConfig& ch, double sigma_y,
                           double bias) {
  const double mean_signal = stats.scheme == Scheme::DCO ? stats.K * bias + stats.mu
                                                         : stats.K * sigma_y * kInvSqrt2Pi + stats.mu;
  return ch.alpha * ch.dc_gain() * mean_signal + ch.lambda_b;
}

/// Variance of the receiver transform output on subcarrier k.
inline double variance_xhat(Scheme scheme, const ClipStats& stats, const ChannelConfig& ch,
                            std::size_t k, std::size_t n, double sigma_y, double bias) {
  if (stats.scheme != scheme)
    throw std::invalid_argument("variance_xhat: clip statistics belong to the other scheme");
  const double g2 = std::norm(ch.gains.at(k));
  const double clip = ch.alpha * ch.alpha * stats.sigma2 * g2;
  return (clip + photon_floor(stats, ch, sigma_y, bias)) / static_cast<double>(n);
}

namespace detail {

inline double snr_from_stats(const WaveformConfig& wf, const ClipStats& stats,
                             const ChannelConfig& ch, std::size_t k, double floor) {
  const double w = wf.weight(k);
  const double g2 = std::norm(ch.gains[k]);
  const double a2 = ch.alpha * ch.alpha;
  const double num = static_cast<double>(wf.N) * a2 * stats.K * stats.K * w * w * g2;
  const double den = a2 * stats.sigma2 * g2 + floor;
  // ACO data subcarriers carry half the signal amplitude.
  const double scale = wf.scheme == Scheme::ACO ? 0.25 : 1.0;
  if (num == 0.0) return 0.0;
  return scale * num / den;
}

inline bool is_data_subcarrier(const WaveformConfig& wf, std::size_t k) {
  if (k == 0 || k >= wf.N / 2) return false;
  return wf.scheme == Scheme::DCO || k % 2 == 1;
}

inline double apply_log(LogBase base, double x) {
  return base == LogBase::Natural ? std::log1p(x) : std::log2(1.0 + x);
}

}  // namespace detail

/// Linear SNR of data subcarrier k.
///
/// The numerator grows with w_k^2, but w_k also enters sigma_y and therefore
/// the clipping levels eps = level / sigma_y and ClipStats. With bias and peak
/// held in absolute units, raising one weight raises clipping on every
/// subcarrier; the SNR is only monotone in w_k^2 when sigma_y is held fixed.
inline double snr_subcarrier(std::size_t k, const WaveformConfig& wf, const ChannelConfig& ch) {
  if (!detail::is_data_subcarrier(wf, k))
    throw std::invalid_argument("subcarrier " + std::to_string(k) + " carries no " +
                                std::string(to_string(wf.scheme)) + " data");
  if (wf.sigma_y() == 0.0) return 0.0;
  const ClipStats stats = clip_stats(wf);
  const double floor = photon_floor(stats, ch, wf.sigma_y(), wf.bias());
  return detail::snr_from_stats(wf, stats, ch, k, floor);
}

/// Analytic report for every data subcarrier.
inline std::vector<SubcarrierReport> analyze(const WaveformConfig& wf, const ChannelConfig& ch,
                                             LogBase base = LogBase::Natural) {
  std::vector<SubcarrierReport> out;
  const auto ks = wf.data_subcarriers();
  out.reserve(ks.size());
  if (wf.sigma_y() == 0.0) {
    for (auto k : ks) out.push_back({k, 0.0, -1.0, 0.0});
    return out;
  }
  const ClipStats stats = clip_stats(wf);
  const double floor = photon_floor(stats, ch, wf.sigma_y(), wf.bias());
  for (auto k : ks) {
    const double snr = detail::snr_from_stats(wf, stats, ch, k, floor);
    out.push_back({k, snr, -1.0, detail::apply_log(base, snr)});
  }
  return out;
}

/// Mean optical power of the clipped waveform: B_DC + beta (DCO) or
/// sigma_y / sqrt(2 pi) + beta (ACO).
inline double mean_transmit_power(const WaveformConfig& wf) {
  const double sy = wf.sigma_y();
  if (sy == 0.0) return wf.scheme == Scheme::DCO ? wf.bias() : 0.0;
  const ClipStats s = clip_stats(wf);
  return wf.scheme == Scheme::DCO ? wf.bias() + s.beta : sy * kInvSqrt2Pi + s.beta;
}

/// Sum of log(1 + SNR_k) over the data subcarriers.
inline double total_rate(const WaveformConfig& wf, const ChannelConfig& ch,
                         LogBase base = LogBase::Natural) {
  double r = 0.0;
  for (const auto& rep : analyze(wf, ch, base)) r += rep.rate;
  return r;
}

}  // namespace owc
