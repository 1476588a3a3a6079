#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

#include "owc/analytic.hpp"
#include "owc/ofdm.hpp"
#include "owc/poisson.hpp"

namespace owc {

/// y_r = IDFT(g_k . DFT(y_hat)); the per-subcarrier gains act as a circular
/// filter on the transmitted optical power.
inline std::vector<double> apply_gains(const std::vector<double>& y_hat,
                                       const std::vector<cplx>& gains, const FourierPlan& plan) {
  if (gains.size() != y_hat.size()) throw std::invalid_argument("apply_gains: length mismatch");
  std::vector<cplx> buf(y_hat.begin(), y_hat.end());
  plan.forward(buf);
  for (std::size_t k = 0; k < buf.size(); ++k) buf[k] *= gains[k];
  plan.inverse_unscaled(buf);
  std::vector<double> out(buf.size());
  for (std::size_t n = 0; n < buf.size(); ++n) out[n] = buf[n].real();
  return out;
}

inline std::vector<double> apply_gains(const std::vector<double>& y_hat,
                                       const std::vector<cplx>& gains) {
  return apply_gains(y_hat, gains, FourierPlan(y_hat.size()));
}

struct PhotonCounts {
  std::vector<std::uint64_t> z;
  std::vector<double> lambda;
  std::size_t clamped = 0;  ///< samples whose mean fell below zero and was clamped
};

/// Independent Poisson counts with mean max(alpha y_r[n] + lambda_b, 0).
inline PhotonCounts photon_sample(const std::vector<double>& y_r, double alpha, double lambda_b,
                                  Rng& rng) {
  PhotonCounts pc{std::vector<std::uint64_t>(y_r.size()), std::vector<double>(y_r.size()), 0};
  for (std::size_t n = 0; n < y_r.size(); ++n) {
    double lam = alpha * y_r[n] + lambda_b;
    if (lam < 0.0) {
      lam = 0.0;
      ++pc.clamped;
    }
    pc.lambda[n] = lam;
    pc.z[n] = poisson(lam, rng);
  }
  return pc;
}

/// x_hat_k = (1/N) sum_n z_n e^{-j 2 pi n k / N}.
inline std::vector<cplx> demodulate(const std::vector<std::uint64_t>& counts,
                                    const FourierPlan& plan) {
  std::vector<cplx> buf(counts.size());
  for (std::size_t n = 0; n < counts.size(); ++n) buf[n] = static_cast<double>(counts[n]);
  plan.forward(buf);
  return buf;
}

inline std::vector<cplx> demodulate(const std::vector<std::uint64_t>& counts) {
  return demodulate(counts, FourierPlan(counts.size()));
}

/// Effective symbol gain of subcarrier k: alpha K g_k, halved for ACO.
inline cplx symbol_gain(Scheme scheme, double alpha, double K, cplx g) {
  return (scheme == Scheme::ACO ? 0.5 : 1.0) * alpha * K * g;
}

/// x_hat_k divided by the effective symbol gain.
inline cplx unbiased_estimate(cplx xhat, double alpha, double K, cplx g, Scheme scheme) {
  const cplx d = symbol_gain(scheme, alpha, K, g);
  if (d == cplx(0.0)) throw std::invalid_argument("unbiased_estimate: zero symbol gain");
  return xhat / d;
}

// ---------------------------------------------------------------------------
// Monte Carlo link

struct SimulationOptions {
  std::size_t frames = 100000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  Constellation constellation = Constellation::Qam4;
  /// Reuse one symbol draw for every frame (conditional statistics).
  bool fixed_symbols = false;
  /// Subcarriers whose residual samples are kept.
  std::vector<std::size_t> capture;
};

/// Frames per independently seeded block. Part of the reproducibility
/// contract: changing it changes every stochastic output.
inline constexpr std::size_t kFramesPerBlock = 512;

/// Residual e_k = x_hat_k - (effective symbol gain) x_k on one subcarrier.
struct ResidualStats {
  std::size_t k = 0;
  double mean_re = 0.0, mean_im = 0.0;
  double var_re = 0.0, var_im = 0.0;  ///< unbiased
  double cov = 0.0;                   ///< cov(re, im), unbiased
  double variance() const { return var_re + var_im; }
};

struct SimulationResult {
  Scheme scheme = Scheme::DCO;
  std::size_t frames = 0;
  ClipStats stats{};
  std::vector<ResidualStats> residuals;            ///< one per data subcarrier
  std::vector<double> mean_counts;                 ///< E[z_n] estimate per time index
  std::vector<double> var_counts;                  ///< per time index, unbiased
  std::vector<double> mean_clipped;                ///< E[y_hat_n] estimate
  std::size_t clamped = 0;
  std::vector<std::vector<cplx>> captured;         ///< same order as options.capture
  std::optional<FrequencyFrame> fixed_frame;

  double clamp_fraction() const {
    return frames == 0 ? 0.0
                       : static_cast<double>(clamped) /
                             static_cast<double>(frames * mean_counts.size());
  }
};

namespace detail {

struct BlockAccumulator {
  // per data subcarrier: sum re, im, re^2, im^2, re*im
  std::vector<double> s_re, s_im, s_rr, s_ii, s_ri;
  std::vector<double> z1, z2, yc;
  std::size_t clamped = 0;
  std::vector<std::vector<cplx>> captured;

  BlockAccumulator(std::size_t data, std::size_t n, std::size_t cap)
      : s_re(data), s_im(data), s_rr(data), s_ii(data), s_ri(data), z1(n), z2(n), yc(n),
        captured(cap) {}
};

}  // namespace detail

inline FrequencyFrame draw_fixed_frame(const WaveformConfig& wf, const SimulationOptions& opt) {
  Rng rng(substream_seed(opt.seed, UINT64_MAX));
  return make_frame(wf, opt.constellation, rng);
}

/// Runs `opt.frames` independent OFDM symbols through clipping, the gain
/// filter and the photon counter. Blocks of kFramesPerBlock frames draw from
/// their own sub-stream and are reduced in block order, so the result does
/// not depend on the worker count.
inline SimulationResult simulate_link(const WaveformConfig& wf, const ChannelConfig& ch,
                                      const SimulationOptions& opt) {
  wf.validate();
  ch.validate(wf.N);
  if (opt.frames < 2) throw std::invalid_argument("simulate_link: need at least 2 frames");
  const std::size_t n = wf.N;
  const auto ks = wf.data_subcarriers();
  for (auto k : opt.capture)
    if (std::find(ks.begin(), ks.end(), k) == ks.end())
      throw std::invalid_argument("capture subcarrier " + std::to_string(k) + " carries no data");

  SimulationResult res;
  res.scheme = wf.scheme;
  res.frames = opt.frames;
  res.stats = clip_stats(wf);
  if (opt.fixed_symbols) res.fixed_frame = draw_fixed_frame(wf, opt);

  std::vector<cplx> eff(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i)
    eff[i] = symbol_gain(wf.scheme, ch.alpha, res.stats.K, ch.gains[ks[i]]);

  const std::size_t blocks = (opt.frames + kFramesPerBlock - 1) / kFramesPerBlock;
  std::vector<detail::BlockAccumulator> acc;
  acc.reserve(blocks);
  for (std::size_t b = 0; b < blocks; ++b) acc.emplace_back(ks.size(), n, opt.capture.size());

  std::vector<std::size_t> cap_index;
  for (auto k : opt.capture) cap_index.push_back(std::find(ks.begin(), ks.end(), k) - ks.begin());

  auto run_block = [&](std::size_t b) {
    const FourierPlan plan(n);
    Rng rng(substream_seed(opt.seed, b));
    auto& a = acc[b];
    const std::size_t first = b * kFramesPerBlock;
    const std::size_t last = std::min(opt.frames, first + kFramesPerBlock);
    for (std::size_t f = first; f < last; ++f) {
      const FrequencyFrame frame = opt.fixed_symbols ? *res.fixed_frame
                                                     : make_frame(wf, opt.constellation, rng);
      const TimeFrame t = clip(wf, modulate(frame, plan));
      const auto y_r = apply_gains(t.y_hat, ch.gains, plan);
      const auto pc = photon_sample(y_r, ch.alpha, ch.lambda_b, rng);
      const auto xhat = demodulate(pc.z, plan);
      a.clamped += pc.clamped;
      for (std::size_t i = 0; i < n; ++i) {
        const double z = static_cast<double>(pc.z[i]);
        a.z1[i] += z;
        a.z2[i] += z * z;
        a.yc[i] += t.y_hat[i];
      }
      for (std::size_t i = 0; i < ks.size(); ++i) {
        const cplx e = xhat[ks[i]] - eff[i] * frame.x[ks[i]];
        a.s_re[i] += e.real();
        a.s_im[i] += e.imag();
        a.s_rr[i] += e.real() * e.real();
        a.s_ii[i] += e.imag() * e.imag();
        a.s_ri[i] += e.real() * e.imag();
      }
      for (std::size_t c = 0; c < cap_index.size(); ++c) {
        const std::size_t i = cap_index[c];
        a.captured[c].push_back(xhat[ks[i]] - eff[i] * frame.x[ks[i]]);
      }
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(opt.workers, blocks));
  if (workers == 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t b = w; b < blocks; b += workers) run_block(b);
      });
    for (auto& t : pool) t.join();
  }

  // Reduce in block order.
  detail::BlockAccumulator tot(ks.size(), n, opt.capture.size());
  for (auto& a : acc) {
    for (std::size_t i = 0; i < ks.size(); ++i) {
      tot.s_re[i] += a.s_re[i];
      tot.s_im[i] += a.s_im[i];
      tot.s_rr[i] += a.s_rr[i];
      tot.s_ii[i] += a.s_ii[i];
      tot.s_ri[i] += a.s_ri[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      tot.z1[i] += a.z1[i];
      tot.z2[i] += a.z2[i];
      tot.yc[i] += a.yc[i];
    }
    tot.clamped += a.clamped;
    for (std::size_t c = 0; c < a.captured.size(); ++c)
      tot.captured[c].insert(tot.captured[c].end(), a.captured[c].begin(), a.captured[c].end());
  }

  const double m = static_cast<double>(opt.frames);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    ResidualStats r;
    r.k = ks[i];
    r.mean_re = tot.s_re[i] / m;
    r.mean_im = tot.s_im[i] / m;
    r.var_re = (tot.s_rr[i] - m * r.mean_re * r.mean_re) / (m - 1.0);
    r.var_im = (tot.s_ii[i] - m * r.mean_im * r.mean_im) / (m - 1.0);
    r.cov = (tot.s_ri[i] - m * r.mean_re * r.mean_im) / (m - 1.0);
    res.residuals.push_back(r);
  }
  res.mean_counts.resize(n);
  res.var_counts.resize(n);
  res.mean_clipped.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    res.mean_counts[i] = tot.z1[i] / m;
    res.var_counts[i] = (tot.z2[i] - m * res.mean_counts[i] * res.mean_counts[i]) / (m - 1.0);
    res.mean_clipped[i] = tot.yc[i] / m;
  }
  res.clamped = tot.clamped;
  res.captured = std::move(tot.captured);
  return res;
}

struct EmpiricalSnr {
  std::size_t k = 0;
  double snr = 0.0;
  bool degenerate = false;  ///< residual variance was zero; snr left at 0
};

/// SNR_k = |effective symbol gain|^2 w_k^2 / Var(e_k).
inline std::vector<EmpiricalSnr> empirical_snr(const WaveformConfig& wf, const ChannelConfig& ch,
                                               const SimulationResult& sim) {
  std::vector<EmpiricalSnr> out;
  for (const auto& r : sim.residuals) {
    const double w = wf.weight(r.k);
    const double sig = std::norm(symbol_gain(wf.scheme, ch.alpha, sim.stats.K, ch.gains[r.k])) * w * w;
    const double v = r.variance();
    if (!(v > 0.0)) {
      out.push_back({r.k, 0.0, true});
      continue;
    }
    out.push_back({r.k, sig / v, false});
  }
  return out;
}

inline std::vector<EmpiricalSnr> empirical_snr(const WaveformConfig& wf, const ChannelConfig& ch,
                                               const SimulationOptions& opt) {
  if (opt.frames < 1000) throw std::invalid_argument("empirical_snr: need at least 1000 frames");
  return empirical_snr(wf, ch, simulate_link(wf, ch, opt));
}

}  // namespace owc
