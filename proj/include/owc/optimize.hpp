#pragma once

// Subcarrier power allocation under a mean optical power bound and a peak
// power: a uniform-weight baseline searched over (sigma_y, bias), a binary
// coded breeder-style genetic algorithm over per-subcarrier weights, and
// second-derivative diagnostics of the power constraint.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <thread>
#include <tuple>
#include <vector>

#include "owc/analytic.hpp"
#include "owc/random.hpp"

namespace owc {

struct AllocationProblem {
  Scheme scheme = Scheme::DCO;
  std::size_t N = 64;
  ChannelConfig channel;
  double power_limit = 0.1;  ///< bound on the mean optical power, W
  double peak = 0.1;         ///< y_max, W
  LogBase log_base = LogBase::Natural;

  std::size_t data_count() const { return WaveformConfig::data_count(scheme, N); }

  void validate() const {
    if (!(power_limit > 0.0)) throw std::invalid_argument("power limit must be positive");
    if (!(peak > 0.0)) throw std::invalid_argument("peak power must be positive");
    channel.validate(N);
  }
};

enum class Method { GA, Uniform };

inline std::string_view to_string(Method m) { return m == Method::GA ? "GA" : "UNIFORM"; }

struct AllocationSolution {
  std::vector<double> weights;
  double bias = 0.0;
  bool feasible = false;
  double total_rate = 0.0;
  double power = 0.0;
  Method method = Method::Uniform;
  double sigma_y() const {
    double s = 0.0;
    for (double w : weights) s += w * w;
    return std::sqrt(2.0 * s);
  }
};

/// Mean optical power of the clipped waveform for absolute bias and peak.
inline double constraint_power(Scheme scheme, std::size_t n, const std::vector<double>& weights,
                               double bias, double peak) {
  WaveformConfig wf{scheme, n, weights, 0.0, 0.0};
  const double sy = wf.sigma_y();
  if (sy == 0.0) return scheme == Scheme::DCO ? bias : 0.0;
  if (scheme == Scheme::DCO) {
    if (!(bias > 0.0 && bias < peak))
      throw std::invalid_argument("constraint_power: DCO requires 0 < bias < peak");
    const ClipStats s = clip_stats_dco(bias / sy, peak / sy, sy);
    return bias + s.beta;
  }
  const ClipStats s = clip_stats_aco(peak / sy, sy);
  return sy * kInvSqrt2Pi + s.beta;
}

/// Total rate of a candidate allocation; 0 for the all-zero waveform.
inline double allocation_rate(const AllocationProblem& p, const std::vector<double>& weights,
                              double bias) {
  WaveformConfig wf{p.scheme, p.N, weights, 0.0, 0.0};
  const double sy = wf.sigma_y();
  if (sy == 0.0) return 0.0;
  wf.eps_bias = p.scheme == Scheme::DCO ? bias / sy : 0.0;
  wf.eps_top = p.peak / sy;
  return total_rate(wf, p.channel, p.log_base);
}

// ---------------------------------------------------------------------------
// Uniform baseline

struct UniformSearch {
  std::size_t grid_resolution = 100;  ///< points per axis of the coarse grid
  std::size_t refine_levels = 3;      ///< nested zoomed grids around the incumbent
  std::size_t polish_sweeps = 4;      ///< golden-section coordinate sweeps
};

namespace detail {

inline std::vector<double> uniform_weights(std::size_t count, double sigma_y) {
  return std::vector<double>(count, sigma_y / std::sqrt(2.0 * static_cast<double>(count)));
}

inline double dco_power_uniform(double sigma_y, double bias, double peak) {
  const ClipStats s = clip_stats_dco(bias / sigma_y, peak / sigma_y, sigma_y);
  return bias + s.beta;
}

/// Largest admissible bias for a given sigma_y. The DCO mean power is
/// nondecreasing in the bias, so bisection applies.
inline double dco_bias_limit(double sigma_y, double peak, double power_limit) {
  const double hi_bias = peak * (1.0 - 1e-9);
  if (dco_power_uniform(sigma_y, hi_bias, peak) <= power_limit) return hi_bias;
  double lo = 0.0, hi = hi_bias;
  const double lo_bias = peak * 1e-12;
  if (dco_power_uniform(sigma_y, lo_bias, peak) > power_limit) return 0.0;
  lo = lo_bias;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * peak; ++it) {
    const double mid = 0.5 * (lo + hi);
    (dco_power_uniform(sigma_y, mid, peak) <= power_limit ? lo : hi) = mid;
  }
  return lo;
}

/// Largest sigma_y meeting the ACO power bound (mean power increases with sigma_y).
inline double aco_sigma_limit(double peak, double power_limit, double cap) {
  auto power = [&](double s) { return s * kInvSqrt2Pi + clip_stats_aco(peak / s, s).beta; };
  if (power(cap) <= power_limit) return cap;
  double lo = 0.0, hi = cap;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * cap; ++it) {
    const double mid = 0.5 * (lo + hi);
    (power(mid) <= power_limit ? lo : hi) = mid;
  }
  return lo;
}

/// Golden-section maximisation of f on [a, b]; returns (argmax, max). The
/// incumbent (x0, f0) is kept when the search finds nothing better.
inline std::pair<double, double> golden_max(const std::function<double(double)>& f, double a,
                                            double b, double x0, double f0, int iters = 60) {
  const double r = 0.61803398874989484820;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  const double x = fc > fd ? c : d, fx = std::max(fc, fd);
  return fx > f0 ? std::pair{x, fx} : std::pair{x0, f0};
}

}  // namespace detail

/// Upper end of the sigma_y search range. For sigma_y much larger than the
/// peak the waveform is clipped almost everywhere and the rate collapses.
inline double sigma_search_cap(const AllocationProblem& p) {
  return 1.5 * std::sqrt(2.0 * std::numbers::pi) * std::min(p.power_limit, p.peak);
}

/// Best equal-weight allocation. DCO searches (sigma_y, t) with bias =
/// t * bias_limit(sigma_y), so every grid point is feasible; ACO searches
/// sigma_y up to its power limit.
inline AllocationSolution uniform_allocate(const AllocationProblem& p,
                                           const UniformSearch& search = {}) {
  p.validate();
  if (search.grid_resolution < 50)
    throw std::invalid_argument("uniform_allocate: grid resolution must be at least 50");
  const std::size_t count = p.data_count();
  const double cap = sigma_search_cap(p);
  const std::size_t R = search.grid_resolution;

  AllocationSolution best;
  best.method = Method::Uniform;

  if (p.scheme == Scheme::ACO) {
    const double smax = detail::aco_sigma_limit(p.peak, p.power_limit, cap);
    auto f = [&](double s) {
      return s > 0.0 ? allocation_rate(p, detail::uniform_weights(count, s), 0.0) : 0.0;
    };
    double lo = 0.0, hi = smax, xs = 0.0, fs = 0.0;
    for (std::size_t level = 0; level <= search.refine_levels; ++level) {
      const double step = (hi - lo) / static_cast<double>(R);
      for (std::size_t i = 1; i <= R; ++i) {
        const double s = lo + step * static_cast<double>(i);
        const double v = f(s);
        if (v > fs) fs = v, xs = s;
      }
      lo = std::max(0.0, xs - 2.0 * step);
      hi = std::min(smax, xs + 2.0 * step);
    }
    if (search.polish_sweeps > 0) std::tie(xs, fs) = detail::golden_max(f, lo, hi, xs, fs);
    best.weights = detail::uniform_weights(count, xs);
    best.total_rate = fs;
    best.power = xs > 0.0 ? constraint_power(p.scheme, p.N, best.weights, 0.0, p.peak) : 0.0;
    best.feasible = best.power <= p.power_limit + 1e-9;
    return best;
  }

  auto rate_at = [&](double s, double t) {
    if (!(s > 0.0) || !(t > 0.0)) return 0.0;
    const double bmax = detail::dco_bias_limit(s, p.peak, p.power_limit);
    if (!(bmax > 0.0)) return 0.0;
    return allocation_rate(p, detail::uniform_weights(count, s), std::min(t, 1.0) * bmax);
  };

  double s_lo = 0.0, s_hi = cap, t_lo = 0.0, t_hi = 1.0;
  double xs = 0.0, xt = 0.0, fs = 0.0;
  for (std::size_t level = 0; level <= search.refine_levels; ++level) {
    const double ds = (s_hi - s_lo) / static_cast<double>(R);
    const double dt = (t_hi - t_lo) / static_cast<double>(R);
    for (std::size_t i = 1; i <= R; ++i) {
      const double s = s_lo + ds * static_cast<double>(i);
      const double bmax = detail::dco_bias_limit(s, p.peak, p.power_limit);
      if (!(bmax > 0.0)) continue;
      const auto w = detail::uniform_weights(count, s);
      for (std::size_t j = 1; j <= R; ++j) {
        const double t = t_lo + dt * static_cast<double>(j);
        const double v = allocation_rate(p, w, t * bmax);
        if (v > fs) fs = v, xs = s, xt = t;
      }
    }
    s_lo = std::max(0.0, xs - 2.0 * ds);
    s_hi = std::min(cap, xs + 2.0 * ds);
    t_lo = std::max(0.0, xt - 2.0 * dt);
    t_hi = std::min(1.0, xt + 2.0 * dt);
  }
  for (std::size_t sweep = 0; sweep < search.polish_sweeps; ++sweep) {
    std::tie(xs, fs) =
        detail::golden_max([&](double s) { return rate_at(s, xt); }, s_lo, s_hi, xs, fs);
    std::tie(xt, fs) =
        detail::golden_max([&](double t) { return rate_at(xs, t); }, t_lo, t_hi, xt, fs);
  }
  if (fs > 0.0) {
    best.weights = detail::uniform_weights(count, xs);
    best.bias = xt * detail::dco_bias_limit(xs, p.peak, p.power_limit);
    best.total_rate = fs;
    best.power = constraint_power(p.scheme, p.N, best.weights, best.bias, p.peak);
    best.feasible = best.power <= p.power_limit + 1e-9 && best.bias > 0.0 && best.bias < p.peak;
  } else {
    // Nothing beats the zero waveform; a small bias keeps the DC constraint valid.
    best.weights.assign(count, 0.0);
    best.bias = 0.5 * std::min(p.power_limit, p.peak);
    best.power = best.bias;
    best.feasible = true;
  }
  return best;
}

/// Smallest alpha at which the uniform allocation reaches `target_rate`,
/// found by bisection in log(alpha). The optimum rate increases with alpha
/// because every subcarrier SNR does.
inline double calibrate_alpha(AllocationProblem p, double target_rate, double lo = 1e9,
                              double hi = 1e14, const UniformSearch& search = {},
                              int iterations = 50) {
  auto rate = [&](double a) {
    p.channel.alpha = a;
    return uniform_allocate(p, search).total_rate;
  };
  if (rate(lo) > target_rate || rate(hi) < target_rate)
    throw std::runtime_error("calibrate_alpha: target rate not bracketed");
  double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (llo + lhi);
    (rate(std::exp(mid)) < target_rate ? llo : lhi) = mid;
  }
  return std::exp(0.5 * (llo + lhi));
}

// ---------------------------------------------------------------------------
// Genetic algorithm

struct GAParams {
  std::size_t population = 1000;
  std::size_t generations = 70;
  unsigned precision_bits = 20;
  double generation_gap = 0.9;
  double upper = 0.5;  ///< upper bound of every weight, lower bound 0
  double bias_upper = 0.5;  ///< upper bound of the DCO bias variable
  double selection_pressure = 2.0;
  double mutation_range = 0.1;      ///< fraction of the variable domain
  unsigned mutation_precision = 16;  ///< exponential step resolution
  std::size_t init_attempts = 10;    ///< population redraws when nothing is feasible
  unsigned workers = 1;

  void validate() const {
    if (population < 4 || population % 2 != 0)
      throw std::invalid_argument("GA population must be even and at least 4");
    if (precision_bits < 1 || precision_bits > 52) throw std::invalid_argument("precision_bits must be in 1..52");
    if (!(generation_gap > 0.0 && generation_gap <= 1.0))
      throw std::invalid_argument("generation gap must be in (0, 1]");
    if (!(upper > 0.0) || !(bias_upper > 0.0))
      throw std::invalid_argument("GA upper bounds must be positive");
    if (!(selection_pressure >= 1.0 && selection_pressure <= 2.0))
      throw std::invalid_argument("linear ranking requires selection pressure in [1, 2]");
  }
};

/// Decision vector layout: data-subcarrier weights, then (DCO) the bias.
struct GAResult {
  AllocationSolution solution;
  double initial_best = -std::numeric_limits<double>::infinity();
  std::vector<double> best_per_generation;  ///< best feasible rate so far
  std::size_t init_draws = 0;
};

namespace detail {

inline constexpr double kInfeasiblePenalty = 1e6;

/// Rate for feasible points, otherwise -penalty * violation (< 0).
inline double ga_objective(const AllocationProblem& p, const std::vector<double>& v,
                           bool* feasible = nullptr) {
  const std::size_t count = p.data_count();
  std::vector<double> w(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(count));
  const double bias = p.scheme == Scheme::DCO ? v[count] : 0.0;
  double violation = 0.0;
  double power = 0.0;
  if (p.scheme == Scheme::DCO && !(bias > 0.0 && bias < p.peak)) {
    violation = std::max(0.0, bias - p.peak) + std::max(0.0, bias - p.power_limit) + 1e-9;
  } else {
    power = constraint_power(p.scheme, p.N, w, bias, p.peak);
    violation = std::max(0.0, power - p.power_limit);
  }
  if (feasible) *feasible = violation == 0.0;
  if (violation > 0.0) return -kInfeasiblePenalty * violation;
  return allocation_rate(p, w, bias);
}

/// Linear ranking fitness; ties share the mean of their rank fitness.
inline std::vector<double> rank_fitness(const std::vector<double>& obj, double sp) {
  const std::size_t n = obj.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return obj[a] < obj[b]; });
  std::vector<double> fit(n);
  const double denom = static_cast<double>(n - 1);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && obj[order[j + 1]] == obj[order[i]]) ++j;
    double acc = 0.0;
    for (std::size_t r = i; r <= j; ++r)
      acc += 2.0 - sp + 2.0 * (sp - 1.0) * static_cast<double>(r) / denom;
    for (std::size_t r = i; r <= j; ++r) fit[order[r]] = acc / static_cast<double>(j - i + 1);
    i = j + 1;
  }
  return fit;
}

/// Stochastic universal sampling of `count` indices, returned shuffled.
inline std::vector<std::size_t> sus(const std::vector<double>& fit, std::size_t count, Rng& rng) {
  const double total = std::accumulate(fit.begin(), fit.end(), 0.0);
  const double step = total / static_cast<double>(count);
  double ptr = rng.uniform() * step;
  std::vector<std::size_t> out;
  out.reserve(count);
  double cum = 0.0;
  std::size_t i = 0;
  for (std::size_t c = 0; c < count; ++c) {
    while (i + 1 < fit.size() && cum + fit[i] <= ptr) cum += fit[i++];
    out.push_back(i);
    ptr += step;
  }
  for (std::size_t k = out.size(); k > 1; --k) std::swap(out[k - 1], out[rng.below(k)]);
  return out;
}

}  // namespace detail

/// Binary-coded GA: linear ranking with stochastic universal sampling,
/// discrete recombination, breeder-style mutation, and elitist fitness-based
/// reinsertion of the generation gap. All random draws for a generation are
/// taken before its objective evaluations, which may run on several threads.
inline GAResult ga_allocate(const AllocationProblem& p, const GAParams& ga, std::uint64_t seed) {
  p.validate();
  ga.validate();
  const std::size_t count = p.data_count();
  const std::size_t nvar = count + (p.scheme == Scheme::DCO ? 1 : 0);
  const std::size_t pop = ga.population;
  const double levels = std::ldexp(1.0, static_cast<int>(ga.precision_bits)) - 1.0;
  std::vector<double> ub(nvar, ga.upper);
  if (p.scheme == Scheme::DCO) ub[count] = ga.bias_upper;
  Rng rng(seed);

  auto decode = [&](std::uint64_t code, std::size_t v) {
    return ub[v] * static_cast<double>(code) / levels;
  };
  auto quantize = [&](double x, std::size_t v) {
    const double c = std::nearbyint(std::clamp(x, 0.0, ub[v]) / ub[v] * levels);
    return decode(static_cast<std::uint64_t>(c), v);
  };
  const std::uint64_t mask = (std::uint64_t{1} << ga.precision_bits) - 1;

  auto evaluate = [&](const std::vector<std::vector<double>>& xs, std::vector<double>& obj,
                      std::vector<char>& feas) {
    obj.assign(xs.size(), 0.0);
    feas.assign(xs.size(), 0);
    auto work = [&](std::size_t from, std::size_t stride) {
      for (std::size_t i = from; i < xs.size(); i += stride) {
        bool f = false;
        obj[i] = detail::ga_objective(p, xs[i], &f);
        feas[i] = f;
      }
    };
    const unsigned workers = std::max(1u, ga.workers);
    if (workers == 1) {
      work(0, 1);
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
      for (auto& t : pool) t.join();
    }
  };

  GAResult out;
  AllocationSolution& best = out.solution;
  best.method = Method::GA;
  auto track = [&](const std::vector<std::vector<double>>& xs, const std::vector<double>& obj,
                   const std::vector<char>& feas) {
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (feas[i] && (!best.feasible || obj[i] > best.total_rate)) {
        best.feasible = true;
        best.total_rate = obj[i];
        best.weights.assign(xs[i].begin(), xs[i].begin() + static_cast<std::ptrdiff_t>(count));
        best.bias = p.scheme == Scheme::DCO ? xs[i][count] : 0.0;
      }
  };

  std::vector<std::vector<double>> chrom(pop, std::vector<double>(nvar));
  std::vector<double> obj;
  std::vector<char> feas;
  for (std::size_t attempt = 0; attempt < std::max<std::size_t>(1, ga.init_attempts); ++attempt) {
    ++out.init_draws;
    for (auto& c : chrom)
      for (std::size_t v = 0; v < nvar; ++v) c[v] = decode(rng.bits() & mask, v);
    evaluate(chrom, obj, feas);
    if (std::any_of(feas.begin(), feas.end(), [](char f) { return f != 0; })) break;
  }
  track(chrom, obj, feas);
  if (!best.feasible) return out;  // reported infeasible
  out.initial_best = best.total_rate;
  out.best_per_generation.push_back(best.total_rate);

  const std::size_t nsel = std::max<std::size_t>(
      2, 2 * static_cast<std::size_t>(std::llround(ga.generation_gap * static_cast<double>(pop) / 2.0)));
  const double mut_prob = 1.0 / static_cast<double>(nvar);
  const double step_prob = 1.0 / static_cast<double>(ga.mutation_precision);

  for (std::size_t gen = 0; gen < ga.generations; ++gen) {
    const auto fit = detail::rank_fitness(obj, ga.selection_pressure);
    const auto sel = detail::sus(fit, nsel, rng);

    std::vector<std::vector<double>> kids(nsel, std::vector<double>(nvar));
    for (std::size_t i = 0; i + 1 < nsel; i += 2) {
      const auto& a = chrom[sel[i]];
      const auto& b = chrom[sel[i + 1]];
      for (std::size_t v = 0; v < nvar; ++v) {
        kids[i][v] = (rng.bits() & 1) ? a[v] : b[v];
        kids[i + 1][v] = (rng.bits() & 1) ? a[v] : b[v];
      }
    }
    for (auto& kid : kids)
      for (std::size_t v = 0; v < nvar; ++v) {
        if (rng.uniform() >= mut_prob) continue;
        const double sign = (rng.bits() & 1) ? 1.0 : -1.0;
        double delta = 0.0;
        for (unsigned s = 0; s < ga.mutation_precision; ++s)
          if (rng.uniform() < step_prob) delta += std::ldexp(1.0, -static_cast<int>(s));
        kid[v] = quantize(kid[v] + sign * ga.mutation_range * ub[v] * delta, v);
      }

    std::vector<double> kid_obj;
    std::vector<char> kid_feas;
    evaluate(kids, kid_obj, kid_feas);
    track(kids, kid_obj, kid_feas);

    // Elitist reinsertion: offspring replace the least fit parents.
    std::vector<std::size_t> order(pop);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return obj[a] < obj[b]; });
    const std::size_t replace = std::min(nsel, pop);
    for (std::size_t r = 0; r < replace; ++r) {
      const std::size_t slot = order[r];
      chrom[slot] = std::move(kids[r]);
      obj[slot] = kid_obj[r];
      feas[slot] = kid_feas[r];
    }
    out.best_per_generation.push_back(best.total_rate);
  }
  best.power = constraint_power(p.scheme, p.N, best.weights, best.bias, p.peak);
  return out;
}

// ---------------------------------------------------------------------------
// Non-convexity diagnostics

struct WitnessReport {
  double closed_form = 0.0;
  double finite_difference = 0.0;
  /// DCO only: the same curvature for the exact clipped mean power.
  double exact_closed_form = 0.0;
  double exact_finite_difference = 0.0;
  bool agree(double rel) const {
    return std::abs(closed_form - finite_difference) <= rel * std::abs(closed_form);
  }
};

inline constexpr double kWitnessStep = 1e-3;

namespace detail {

inline double central_second(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

inline double gauss_dphi(double u) { return -u * gauss_phi(u); }
inline double gauss_ddphi(double u) { return (u * u - 1.0) * gauss_phi(u); }

}  // namespace detail

/// DCO mean power B + beta as a function of the bias level, with beta in the
/// form sigma[phi(a) - phi(u) + u phi(u) - a Q(a)], u = eps_top - a.
inline double dco_power_published(double eps_bias, double eps_top, double sigma_y) {
  const double u = eps_top - eps_bias;
  return sigma_y * (eps_bias + gauss_phi(eps_bias) - gauss_phi(u) + u * gauss_phi(u) -
                    eps_bias * gauss_Q(eps_bias));
}

/// Exact DCO mean power E[C(y + B)] as a function of the bias level.
inline double dco_power_exact(double eps_bias, double eps_top, double sigma_y) {
  const double u = eps_top - eps_bias;
  return sigma_y * (eps_bias + (gauss_phi(eps_bias) - eps_bias * gauss_Q(eps_bias)) -
                    (gauss_phi(u) - u * gauss_Q(u)));
}

/// Second derivative of the DCO mean power in the bias level at
/// eps_bias = eps_top - 1. `closed_form` uses the published power expression,
/// sigma{phi(eps_top - 1) - 2 phi(1)}; the exact clipped mean gives
/// sigma{phi(eps_top - 1) - phi(1)}.
inline WitnessReport nonconvexity_witness_dco(double eps_top, double sigma_y) {
  if (!(eps_top > 1.0)) throw std::invalid_argument("DCO witness requires eps_top > 1");
  if (!(sigma_y > 0.0)) throw std::invalid_argument("DCO witness requires sigma_y > 0");
  const double a = eps_top - 1.0;
  const double u = 1.0;
  WitnessReport r;
  r.closed_form = sigma_y * (gauss_phi(a) + (u - 1.0) * detail::gauss_ddphi(u) +
                             2.0 * detail::gauss_dphi(u));
  r.finite_difference = detail::central_second(
      [&](double e) { return dco_power_published(e, eps_top, sigma_y); }, a, kWitnessStep);
  r.exact_closed_form = sigma_y * (gauss_phi(a) - gauss_phi(u));
  r.exact_finite_difference = detail::central_second(
      [&](double e) { return dco_power_exact(e, eps_top, sigma_y); }, a, kWitnessStep);
  return r;
}

/// ACO mean power for sigma_y and absolute peak.
namespace detail {
/// sigma_y / sqrt(2 pi) minus the ACO mean power: sigma_y (phi(e) - e Q(e))
/// with e = peak / sigma_y, kept separate so its curvature survives deep in
/// the unclipped regime.
inline double aco_clip_loss(double sigma_y, double peak) {
  if (sigma_y == 0.0) return 0.0;
  const double e = peak / sigma_y;
  return sigma_y * gauss_phi(e) - peak * gauss_Q(e);
}
}  // namespace detail

inline double aco_power(double sigma_y, double peak) {
  if (sigma_y == 0.0) return 0.0;
  return sigma_y * kInvSqrt2Pi - detail::aco_clip_loss(sigma_y, peak);
}

/// dP/dsigma_y = 1/sqrt(2 pi) - phi(peak / sigma_y).
inline double aco_power_slope(double peak, double sigma_y) {
  if (sigma_y == 0.0) return kInvSqrt2Pi;
  return kInvSqrt2Pi - gauss_phi(peak / sigma_y);
}

/// Second derivative of the ACO mean power along a single weight w_j with
/// all other weights zero. The weight and its mirror give sigma_y = sqrt(2) w_j,
/// so d2P/dw_j^2 = 2 (peak / sigma_y^2) phi'(peak / sigma_y).
inline WitnessReport nonconvexity_witness_aco(double peak, const std::vector<double>& weights,
                                              std::size_t j) {
  if (!(peak > 0.0)) throw std::invalid_argument("ACO witness requires a positive peak");
  if (j >= weights.size()) throw std::invalid_argument("ACO witness: weight index out of range");
  if (!(weights[j] > 0.0)) throw std::invalid_argument("ACO witness requires w_j > 0");
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (i != j && weights[i] != 0.0)
      throw std::invalid_argument("ACO witness requires every other weight to be zero");
  const double w = weights[j];
  const double s = std::sqrt(2.0) * w;
  WitnessReport r;
  r.closed_form = 2.0 * (peak / (s * s)) * detail::gauss_dphi(peak / s);
  // The linear part of the power drops out of the second difference; the step
  // shrinks with (peak / sigma)^2 to track the Gaussian tail.
  const double e = peak / s;
  const double h = kWitnessStep * w / std::max(1.0, e * e);
  r.finite_difference = detail::central_second(
      [&](double x) { return -detail::aco_clip_loss(std::sqrt(2.0) * x, peak); }, w, h);
  return r;
}

}  // namespace owc
