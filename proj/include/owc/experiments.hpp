#pragma once

// Experiment runner behind the command-line tool: run configuration, named
// presets, and the table-producing experiments.

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "owc/analytic.hpp"
#include "owc/channel.hpp"
#include "owc/clip_quadrature.hpp"
#include "owc/csv.hpp"
#include "owc/gains.hpp"
#include "owc/optimize.hpp"
#include "owc/statcheck.hpp"

namespace owc {

using json = nlohmann::json;

#ifdef OWC_DATA_DIR
inline constexpr const char* kDataDir = OWC_DATA_DIR;
#else
inline constexpr const char* kDataDir = "data";
#endif

/// Channel scale calibrated so the uniform allocation reproduces the
/// published 0.10 W rates (94.108 DCO, 72.644 ACO) with natural logarithms.
inline constexpr double kTable2AlphaDco = 2.579407092e11;
inline constexpr double kTable2AlphaAco = 3.084171248e11;

struct RunConfig {
  std::string experiment = "snr_curves";
  std::vector<Scheme> schemes{Scheme::DCO, Scheme::ACO};

  // waveform and channel
  std::size_t N = 64;
  double weight = 0.5;
  double lambda_b = 0.001;
  std::optional<double> alpha;  ///< overrides wavelength / symbol rate
  double wavelength_nm = 450.0;
  double symbol_rate = 2e7;
  std::optional<double> alpha_dco, alpha_aco;  ///< per-scheme overrides of alpha
  std::string gains_file;                      ///< empty: bundled table
  std::string constellation = "qam4";
  std::string log_base = "natural";

  // Monte Carlo
  std::size_t frames = 100000;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;

  // snr_curves
  std::vector<std::pair<double, double>> dco_levels;
  std::vector<double> aco_levels;

  // rate_sweep
  std::vector<double> peaks;
  double power_limit = 0.1;
  bool run_ga = true;
  GAParams ga;
  std::size_t grid_resolution = 100;

  // gaussianity
  double peak = 0.5;
  double dco_eps_bias = 1.0, dco_eps_top = 2.0, aco_eps_top = 2.0;
  std::vector<std::size_t> density_subcarriers{1, 31};

  // witnesses
  std::vector<double> dco_witness_tops;
  std::vector<double> dco_witness_sigmas;
  std::vector<double> aco_witness_peaks;
  std::vector<double> aco_witness_weights;

  // oracle_check
  std::size_t oracle_grid = 20;

  double alpha_for(Scheme s) const {
    if (s == Scheme::DCO && alpha_dco) return *alpha_dco;
    if (s == Scheme::ACO && alpha_aco) return *alpha_aco;
    if (alpha) return *alpha;
    return alpha_from_wavelength(wavelength_nm * 1e-9, symbol_rate);
  }

  std::vector<cplx> gains() const {
    auto g = gains_file.empty() ? table1_gains() : read_gain_table(gains_file);
    if (g.size() != N)
      throw std::invalid_argument("gain table has " + std::to_string(g.size()) +
                                  " subcarriers, config N is " + std::to_string(N));
    return g;
  }

  ChannelConfig channel(Scheme s) const { return {alpha_for(s), lambda_b, gains()}; }

  bool stochastic() const {
    if (experiment == "snr_curves") return frames > 0;
    if (experiment == "gaussianity") return true;
    if (experiment == "rate_sweep") return run_ga;
    return false;
  }

  void validate() const {
    static const char* known[] = {"snr_curves", "gaussianity", "rate_sweep", "witnesses",
                                  "oracle_check"};
    if (std::find(std::begin(known), std::end(known), experiment) == std::end(known))
      throw std::invalid_argument("unknown experiment '" + experiment + "'");
    if (!is_power_of_two(N) || N < 8) throw std::invalid_argument("N must be a power of two >= 8");
    if (!(weight >= 0.0)) throw std::invalid_argument("weight must be nonnegative");
    if (!(lambda_b >= 0.0)) throw std::invalid_argument("lambda_b must be nonnegative");
    if (stochastic() && !seed)
      throw std::invalid_argument("experiment '" + experiment + "' is stochastic: a seed is required");
    if (experiment == "snr_curves" && frames > 0 && frames < 1000)
      throw std::invalid_argument("snr_curves needs frames >= 1000 (or 0 for analytic only)");
    if (experiment == "gaussianity" && frames < 100)
      throw std::invalid_argument("gaussianity needs frames >= 100");
    for (auto [b, t] : dco_levels)
      if (!(b > 0.0 && t > b))
        throw std::invalid_argument("DCO levels require 0 < eps_bias < eps_top");
    for (double t : aco_levels)
      if (!(t > 0.0)) throw std::invalid_argument("ACO top levels must be positive");
    for (double p : peaks)
      if (!(p > 0.0)) throw std::invalid_argument("peak powers must be positive");
    if (experiment == "rate_sweep" && run_ga) ga.validate();
    if (experiment == "gaussianity") {
      if (!(peak > 0.0)) throw std::invalid_argument("peak must be positive");
      if (!(dco_eps_bias > 0.0 && dco_eps_top > dco_eps_bias))
        throw std::invalid_argument("gaussianity DCO levels require 0 < eps_bias < eps_top");
      if (!(aco_eps_top > 0.0)) throw std::invalid_argument("gaussianity ACO top level must be positive");
    }
    if (experiment == "oracle_check" && oracle_grid < 2)
      throw std::invalid_argument("oracle_grid must be at least 2");
    parse_constellation(constellation);
    parse_log_base(log_base);
  }
};

// ---------------------------------------------------------------------------
// JSON mapping

inline json to_json(const RunConfig& c) {
  json j;
  j["experiment"] = c.experiment;
  j["schemes"] = json::array();
  for (auto s : c.schemes) j["schemes"].push_back(std::string(to_string(s)));
  j["N"] = c.N;
  j["weight"] = c.weight;
  j["lambda_b"] = c.lambda_b;
  j["alpha"] = c.alpha ? json(*c.alpha) : json(nullptr);
  j["alpha_dco"] = c.alpha_dco ? json(*c.alpha_dco) : json(nullptr);
  j["alpha_aco"] = c.alpha_aco ? json(*c.alpha_aco) : json(nullptr);
  j["wavelength_nm"] = c.wavelength_nm;
  j["symbol_rate"] = c.symbol_rate;
  j["gains_file"] = c.gains_file;
  j["constellation"] = c.constellation;
  j["log_base"] = c.log_base;
  j["frames"] = c.frames;
  j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  j["workers"] = c.workers;
  j["dco_levels"] = json::array();
  for (auto [b, t] : c.dco_levels) j["dco_levels"].push_back({b, t});
  j["aco_levels"] = c.aco_levels;
  j["peaks"] = c.peaks;
  j["power_limit"] = c.power_limit;
  j["run_ga"] = c.run_ga;
  j["ga"] = {{"population", c.ga.population},
             {"generations", c.ga.generations},
             {"precision_bits", c.ga.precision_bits},
             {"generation_gap", c.ga.generation_gap},
             {"upper", c.ga.upper},
             {"bias_upper", c.ga.bias_upper},
             {"selection_pressure", c.ga.selection_pressure},
             {"mutation_range", c.ga.mutation_range},
             {"mutation_precision", c.ga.mutation_precision}};
  j["grid_resolution"] = c.grid_resolution;
  j["peak"] = c.peak;
  j["dco_eps_bias"] = c.dco_eps_bias;
  j["dco_eps_top"] = c.dco_eps_top;
  j["aco_eps_top"] = c.aco_eps_top;
  j["density_subcarriers"] = c.density_subcarriers;
  j["dco_witness_tops"] = c.dco_witness_tops;
  j["dco_witness_sigmas"] = c.dco_witness_sigmas;
  j["aco_witness_peaks"] = c.aco_witness_peaks;
  j["aco_witness_weights"] = c.aco_witness_weights;
  j["oracle_grid"] = c.oracle_grid;
  return j;
}

namespace detail {

template <class T>
void read_optional(const json& v, std::optional<T>& out) {
  if (v.is_null()) out.reset();
  else out = v.get<T>();
}

}  // namespace detail

/// Applies the keys present in `j` on top of `c`. Unknown keys are errors.
inline void apply_json(RunConfig& c, const json& j) {
  if (!j.is_object()) throw std::invalid_argument("run configuration must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const json& v = it.value();
    try {
      if (key == "experiment") c.experiment = v.get<std::string>();
      else if (key == "schemes") {
        c.schemes.clear();
        for (const auto& s : v) c.schemes.push_back(parse_scheme(s.get<std::string>()));
      } else if (key == "N") c.N = v.get<std::size_t>();
      else if (key == "weight") c.weight = v.get<double>();
      else if (key == "lambda_b") c.lambda_b = v.get<double>();
      else if (key == "alpha") detail::read_optional(v, c.alpha);
      else if (key == "alpha_dco") detail::read_optional(v, c.alpha_dco);
      else if (key == "alpha_aco") detail::read_optional(v, c.alpha_aco);
      else if (key == "wavelength_nm") c.wavelength_nm = v.get<double>();
      else if (key == "symbol_rate") c.symbol_rate = v.get<double>();
      else if (key == "gains_file") c.gains_file = v.get<std::string>();
      else if (key == "constellation") c.constellation = v.get<std::string>();
      else if (key == "log_base") c.log_base = v.get<std::string>();
      else if (key == "frames") c.frames = v.get<std::size_t>();
      else if (key == "seed") detail::read_optional(v, c.seed);
      else if (key == "workers") c.workers = v.get<unsigned>();
      else if (key == "dco_levels") {
        c.dco_levels.clear();
        for (const auto& p : v) {
          if (!p.is_array() || p.size() != 2)
            throw std::invalid_argument("each entry must be [eps_bias, eps_top]");
          c.dco_levels.emplace_back(p[0].get<double>(), p[1].get<double>());
        }
      } else if (key == "aco_levels") c.aco_levels = v.get<std::vector<double>>();
      else if (key == "peaks") c.peaks = v.get<std::vector<double>>();
      else if (key == "power_limit") c.power_limit = v.get<double>();
      else if (key == "run_ga") c.run_ga = v.get<bool>();
      else if (key == "ga") {
        for (auto g = v.begin(); g != v.end(); ++g) {
          const auto& gk = g.key();
          if (gk == "population") c.ga.population = g->get<std::size_t>();
          else if (gk == "generations") c.ga.generations = g->get<std::size_t>();
          else if (gk == "precision_bits") c.ga.precision_bits = g->get<unsigned>();
          else if (gk == "generation_gap") c.ga.generation_gap = g->get<double>();
          else if (gk == "upper") c.ga.upper = g->get<double>();
          else if (gk == "bias_upper") c.ga.bias_upper = g->get<double>();
          else if (gk == "selection_pressure") c.ga.selection_pressure = g->get<double>();
          else if (gk == "mutation_range") c.ga.mutation_range = g->get<double>();
          else if (gk == "mutation_precision") c.ga.mutation_precision = g->get<unsigned>();
          else throw std::invalid_argument("unknown GA key '" + gk + "'");
        }
      } else if (key == "grid_resolution") c.grid_resolution = v.get<std::size_t>();
      else if (key == "peak") c.peak = v.get<double>();
      else if (key == "dco_eps_bias") c.dco_eps_bias = v.get<double>();
      else if (key == "dco_eps_top") c.dco_eps_top = v.get<double>();
      else if (key == "aco_eps_top") c.aco_eps_top = v.get<double>();
      else if (key == "density_subcarriers") c.density_subcarriers = v.get<std::vector<std::size_t>>();
      else if (key == "dco_witness_tops") c.dco_witness_tops = v.get<std::vector<double>>();
      else if (key == "dco_witness_sigmas") c.dco_witness_sigmas = v.get<std::vector<double>>();
      else if (key == "aco_witness_peaks") c.aco_witness_peaks = v.get<std::vector<double>>();
      else if (key == "aco_witness_weights") c.aco_witness_weights = v.get<std::vector<double>>();
      else if (key == "oracle_grid") c.oracle_grid = v.get<std::size_t>();
      else throw std::invalid_argument("unknown key");
    } catch (const json::exception& e) {
      throw std::invalid_argument("config key '" + key + "': " + e.what());
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config key '" + key + "': " + e.what());
    }
  }
}

inline RunConfig read_config(const std::filesystem::path& path, RunConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config '" + path.string() + "': " + e.what());
  }
  apply_json(base, j);
  return base;
}

// ---------------------------------------------------------------------------
// Presets

inline std::vector<std::string> preset_names() {
  return {"fig2", "fig3", "fig4-9", "table2", "table2-reduced", "witnesses", "oracle"};
}

inline RunConfig preset(const std::string& name) {
  RunConfig c;
  if (name == "fig2") {
    c.experiment = "snr_curves";
    c.schemes = {Scheme::DCO};
    for (double b : {1.0, 2.0, 3.0})
      for (double d : {1.0, 2.0, 3.0}) c.dco_levels.emplace_back(b, b + d);
    c.seed = 2;
  } else if (name == "fig3") {
    c.experiment = "snr_curves";
    c.schemes = {Scheme::ACO};
    c.aco_levels = {1, 2, 3, 4, 5, 6};
    c.seed = 3;
  } else if (name == "fig4-9") {
    c.experiment = "gaussianity";
    c.seed = 4;
  } else if (name == "table2" || name == "table2-reduced") {
    c.experiment = "rate_sweep";
    c.peaks = {0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.40, 0.50,
               0.60, 0.70, 0.80, 0.90, 1.00, 1.10, 1.20};
    c.alpha_dco = kTable2AlphaDco;
    c.alpha_aco = kTable2AlphaAco;
    c.seed = 5;
    if (name == "table2-reduced") {
      c.ga.population = 200;
      c.ga.generations = 40;
    }
  } else if (name == "witnesses") {
    c.experiment = "witnesses";
    c.dco_witness_tops = {1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0};
    c.dco_witness_sigmas = {0.5, 1.0, 2.0};
    c.aco_witness_peaks = {0.25, 0.5, 1.0};
    c.aco_witness_weights = {0.05, 0.1, 0.25, 0.5, 1.0};
  } else if (name == "oracle") {
    c.experiment = "oracle_check";
  } else {
    throw std::invalid_argument("unknown preset '" + name + "'");
  }
  return c;
}

// ---------------------------------------------------------------------------
// Experiments

inline double to_db(double linear) {
  return linear > 0.0 ? 10.0 * std::log10(linear) : -std::numeric_limits<double>::infinity();
}

inline std::vector<Table> run_snr_curves(const RunConfig& cfg) {
  cfg.validate();
  Table curves{"snr_curves",
               {"scheme", "eps_bias", "eps_top", "k", "snr_theo", "snr_simu", "snr_theo_dB",
                "snr_simu_dB", "gap_dB", "var_theo", "var_simu", "var_rel_err"},
               {}};
  Table summary{"snr_summary",
                {"scheme", "eps_bias", "eps_top", "max_abs_gap_dB", "mean_gap_dB",
                 "max_abs_var_rel_err", "clamp_fraction"},
                {}};
  std::uint64_t run = 0;
  for (Scheme s : cfg.schemes) {
    std::vector<std::pair<double, double>> levels;
    if (s == Scheme::DCO) levels = cfg.dco_levels;
    else for (double t : cfg.aco_levels) levels.emplace_back(0.0, t);
    const ChannelConfig ch = cfg.channel(s);
    for (auto [eb, et] : levels) {
      const auto wf = WaveformConfig::uniform(s, cfg.N, cfg.weight, eb, et);
      const auto reports = analyze(wf, ch, parse_log_base(cfg.log_base));
      const bool simulate = cfg.frames > 0 && cfg.weight > 0.0;
      std::optional<SimulationResult> sim;
      std::vector<EmpiricalSnr> emp;
      if (simulate) {
        SimulationOptions opt;
        opt.frames = cfg.frames;
        opt.seed = substream_seed(*cfg.seed, run);
        opt.workers = cfg.workers;
        opt.constellation = parse_constellation(cfg.constellation);
        sim = simulate_link(wf, ch, opt);
        emp = empirical_snr(wf, ch, *sim);
      }
      ++run;
      double max_gap = 0.0, sum_gap = 0.0, max_var = 0.0;
      const ClipStats st = wf.sigma_y() > 0.0 ? clip_stats(wf) : ClipStats{s, 1, 0, 0, 0};
      for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        const double var_theo = wf.sigma_y() > 0.0
                                    ? variance_xhat(s, st, ch, r.k, cfg.N, wf.sigma_y(), wf.bias())
                                    : ch.lambda_b / static_cast<double>(cfg.N);
        const double snr_simu = simulate ? emp[i].snr : 0.0;
        const double var_simu = simulate ? sim->residuals[i].variance()
                                         : std::numeric_limits<double>::quiet_NaN();
        const double gap = simulate ? to_db(r.snr_analytic) - to_db(snr_simu)
                                    : std::numeric_limits<double>::quiet_NaN();
        const double vrel = simulate ? var_simu / var_theo - 1.0 : std::numeric_limits<double>::quiet_NaN();
        if (simulate) {
          max_gap = std::max(max_gap, std::abs(gap));
          sum_gap += gap;
          max_var = std::max(max_var, std::abs(vrel));
        }
        curves.rows.push_back({std::string(to_string(s)), eb, et, static_cast<long long>(r.k),
                               r.snr_analytic, snr_simu, to_db(r.snr_analytic), to_db(snr_simu),
                               gap, var_theo, var_simu, vrel});
      }
      const double nan = std::numeric_limits<double>::quiet_NaN();
      summary.rows.push_back({std::string(to_string(s)), eb, et, simulate ? max_gap : nan,
                              simulate ? sum_gap / static_cast<double>(reports.size()) : nan,
                              simulate ? max_var : nan, simulate ? sim->clamp_fraction() : nan});
    }
  }
  return {curves, summary};
}

namespace detail {

inline std::string join_weights(const std::vector<double>& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? ";" : "") + format_cell(w[i]);
  return s;
}

}  // namespace detail

inline std::vector<Table> run_rate_sweep(const RunConfig& cfg) {
  cfg.validate();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  Table rates{"rate_sweep",
              {"peak_power", "dco_ga", "dco_uniform", "aco_ga", "aco_uniform", "dco_ga_feasible",
               "aco_ga_feasible"},
              {}};
  Table sols{"allocations",
             {"scheme", "method", "peak_power", "feasible", "total_rate", "power", "bias", "sigma_y",
              "weights"},
             {}};
  const LogBase base = parse_log_base(cfg.log_base);
  for (std::size_t i = 0; i < cfg.peaks.size(); ++i) {
    std::map<Scheme, std::pair<double, double>> got;  // (ga, uniform)
    std::map<Scheme, long long> feas;
    for (Scheme s : {Scheme::DCO, Scheme::ACO}) {
      got[s] = {nan, nan};
      feas[s] = -1;
      if (std::find(cfg.schemes.begin(), cfg.schemes.end(), s) == cfg.schemes.end()) continue;
      AllocationProblem p{s, cfg.N, cfg.channel(s), cfg.power_limit, cfg.peaks[i], base};
      UniformSearch us;
      us.grid_resolution = cfg.grid_resolution;
      const auto u = uniform_allocate(p, us);
      got[s].second = u.total_rate;
      sols.rows.push_back({std::string(to_string(s)), std::string(to_string(u.method)), cfg.peaks[i],
                           static_cast<long long>(u.feasible), u.total_rate, u.power, u.bias,
                           u.sigma_y(), detail::join_weights(u.weights)});
      if (cfg.run_ga) {
        GAParams ga = cfg.ga;
        ga.workers = cfg.workers;
        const auto r = ga_allocate(p, ga, substream_seed(*cfg.seed, 2 * i + (s == Scheme::ACO)));
        const auto& g = r.solution;
        got[s].first = g.feasible ? g.total_rate : nan;
        feas[s] = g.feasible;
        sols.rows.push_back({std::string(to_string(s)), std::string(to_string(g.method)),
                             cfg.peaks[i], static_cast<long long>(g.feasible), g.total_rate,
                             g.power, g.bias, g.sigma_y(), detail::join_weights(g.weights)});
      }
    }
    rates.rows.push_back({cfg.peaks[i], got[Scheme::DCO].first, got[Scheme::DCO].second,
                          got[Scheme::ACO].first, got[Scheme::ACO].second, feas[Scheme::DCO],
                          feas[Scheme::ACO]});
  }
  return {rates, sols};
}

/// Waveform of the Gaussianity study: uniform weights with sigma_y set by
/// the peak and top level.
inline WaveformConfig gaussianity_waveform(const RunConfig& cfg, Scheme s) {
  const double et = s == Scheme::DCO ? cfg.dco_eps_top : cfg.aco_eps_top;
  const double sy = cfg.peak / et;
  const std::size_t count = WaveformConfig::data_count(s, cfg.N);
  const double w = sy / std::sqrt(2.0 * static_cast<double>(count));
  return WaveformConfig::uniform(s, cfg.N, w, s == Scheme::DCO ? cfg.dco_eps_bias : 0.0, et);
}

inline std::vector<Table> run_gaussianity(const RunConfig& cfg) {
  cfg.validate();
  Table dens{"gaussianity_density", {"scheme", "k", "part", "x", "kde", "moment_fit"}, {}};
  Table fits{"gaussianity_fit",
             {"scheme", "k", "part", "mean", "variance", "bandwidth", "peak_density",
              "sup_distance", "relative_sup_distance"},
             {}};
  Table moments{"gaussianity_moments",
                {"scheme", "k", "mean_re", "mean_im", "z_re", "z_im", "var_re", "var_im"},
                {}};
  Table cov{"gaussianity_covariance", {"scheme", "k", "correlation", "covariance"}, {}};
  std::uint64_t run = 0;
  for (Scheme s : cfg.schemes) {
    const auto wf = gaussianity_waveform(cfg, s);
    const ChannelConfig ch = cfg.channel(s);
    SimulationOptions opt;
    opt.frames = cfg.frames;
    opt.seed = substream_seed(*cfg.seed, run++);
    opt.workers = cfg.workers;
    opt.constellation = parse_constellation(cfg.constellation);
    for (auto k : cfg.density_subcarriers) {
      const auto ks = wf.data_subcarriers();
      if (std::find(ks.begin(), ks.end(), k) != ks.end()) opt.capture.push_back(k);
    }
    const auto sim = simulate_link(wf, ch, opt);
    const std::string sname(to_string(s));
    const double m = static_cast<double>(sim.frames);
    for (const auto& r : sim.residuals) {
      moments.rows.push_back({sname, static_cast<long long>(r.k), r.mean_re, r.mean_im,
                              r.mean_re / std::sqrt(r.var_re / m), r.mean_im / std::sqrt(r.var_im / m),
                              r.var_re, r.var_im});
      cov.rows.push_back({sname, static_cast<long long>(r.k),
                          correlation_from_moments(r.var_re, r.var_im, r.cov), r.cov});
    }
    for (std::size_t c = 0; c < opt.capture.size(); ++c) {
      for (int part = 0; part < 2; ++part) {
        std::vector<double> x;
        x.reserve(sim.captured[c].size());
        for (const auto& e : sim.captured[c]) x.push_back(part == 0 ? e.real() : e.imag());
        const auto est = kde(x);
        const std::string pname = part == 0 ? "re" : "im";
        for (std::size_t i = 0; i < est.grid.size(); ++i)
          dens.rows.push_back({sname, static_cast<long long>(opt.capture[c]), pname, est.grid[i],
                               est.density[i], est.fitted_density(i)});
        fits.rows.push_back({sname, static_cast<long long>(opt.capture[c]), pname,
                             est.moment_fit.mean, est.moment_fit.variance, est.bandwidth,
                             est.peak(), est.sup_distance(), est.sup_distance() / est.peak()});
      }
    }
  }
  return {dens, fits, moments, cov};
}

inline std::vector<Table> run_witnesses(const RunConfig& cfg) {
  cfg.validate();
  Table t{"witnesses",
          {"kind", "level", "scale", "closed_form", "finite_difference", "rel_diff", "negative",
           "exact_closed_form", "exact_finite_difference"},
          {}};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (double et : cfg.dco_witness_tops)
    for (double sy : cfg.dco_witness_sigmas) {
      const auto r = nonconvexity_witness_dco(et, sy);
      t.rows.push_back({std::string("dco_bias"), et, sy, r.closed_form, r.finite_difference,
                        std::abs(r.finite_difference / r.closed_form - 1.0),
                        static_cast<long long>(r.closed_form < 0.0), r.exact_closed_form,
                        r.exact_finite_difference});
    }
  const std::size_t count = WaveformConfig::data_count(Scheme::ACO, cfg.N);
  for (double pk : cfg.aco_witness_peaks)
    for (double w : cfg.aco_witness_weights) {
      std::vector<double> weights(count, 0.0);
      weights[0] = w;
      const auto r = nonconvexity_witness_aco(pk, weights, 0);
      t.rows.push_back({std::string("aco_weight"), pk, w, r.closed_form, r.finite_difference,
                        std::abs(r.finite_difference / r.closed_form - 1.0),
                        static_cast<long long>(r.closed_form < 0.0), nan, nan});
    }
  return {t};
}

/// Relative error with a floor at 1e-12 of the field's natural scale, so
/// fields that vanish identically (beta at a symmetric DCO bias) compare by
/// absolute error.
inline double oracle_rel_err(double analytic, double reference, double scale) {
  return std::abs(analytic - reference) / std::max(std::abs(reference), 1e-12 * scale);
}

inline std::vector<Table> run_oracle_check(const RunConfig& cfg) {
  cfg.validate();
  Table t{"oracle_check", {"scheme", "eps_bias", "eps_top", "field", "analytic", "quadrature", "rel_err"}, {}};
  const std::size_t n = cfg.oracle_grid;
  const double sy = 1.0;
  auto add = [&](Scheme s, double eb, double et, const ClipStats& a, const ClipStats& q) {
    const std::string sn(to_string(s));
    t.rows.push_back({sn, eb, et, std::string("K"), a.K, q.K, oracle_rel_err(a.K, q.K, 1.0)});
    t.rows.push_back({sn, eb, et, std::string("mu"), a.mu, q.mu, oracle_rel_err(a.mu, q.mu, sy)});
    t.rows.push_back({sn, eb, et, std::string("sigma2"), a.sigma2, q.sigma2,
                      oracle_rel_err(a.sigma2, q.sigma2, sy * sy)});
    t.rows.push_back({sn, eb, et, std::string("beta"), a.beta, q.beta, oracle_rel_err(a.beta, q.beta, sy)});
  };
  for (std::size_t i = 0; i < n; ++i) {
    const double eb = 0.25 + (4.0 - 0.25) * static_cast<double>(i) / static_cast<double>(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      const double et = eb + 0.25 + (6.0 - eb - 0.25) * static_cast<double>(j) / static_cast<double>(n - 1);
      add(Scheme::DCO, eb, et, clip_stats_dco(eb, et, sy), clip_stats_dco_quadrature(eb, et, sy));
    }
  }
  for (std::size_t j = 0; j < n * n; ++j) {
    const double et = 0.25 + (6.0 - 0.25) * static_cast<double>(j) / static_cast<double>(n * n - 1);
    add(Scheme::ACO, 0.0, et, clip_stats_aco(et, sy), clip_stats_aco_quadrature(et, sy));
  }
  return {t};
}

inline std::vector<Table> run_experiment(const RunConfig& cfg) {
  if (cfg.experiment == "snr_curves") return run_snr_curves(cfg);
  if (cfg.experiment == "rate_sweep") return run_rate_sweep(cfg);
  if (cfg.experiment == "gaussianity") return run_gaussianity(cfg);
  if (cfg.experiment == "witnesses") return run_witnesses(cfg);
  if (cfg.experiment == "oracle_check") return run_oracle_check(cfg);
  throw std::invalid_argument("unknown experiment '" + cfg.experiment + "'");
}

/// Header block written above every table.
inline std::vector<std::string> table_header(const RunConfig& cfg) {
  return {"owc_lab " + std::string(kVersion), "experiment: " + cfg.experiment,
          "config: " + to_json(cfg).dump()};
}

}  // namespace owc
