#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "owc/experiments.hpp"

using namespace owc;

namespace {

AllocationProblem problem(Scheme s, double peak, double alpha = 0.0, double power = 0.1) {
  if (alpha == 0.0) alpha = s == Scheme::DCO ? kTable2AlphaDco : kTable2AlphaAco;
  return {s, 64, ChannelConfig{alpha, 0.001, table1_gains()}, power, peak, LogBase::Natural};
}

GAParams small_ga() {
  GAParams g;
  g.population = 60;
  g.generations = 15;
  return g;
}

}  // namespace

TEST(Constraint, MatchesWaveformMeanPower) {
  const std::vector<double> w(31, 0.003);
  const auto wf = WaveformConfig::from_levels(Scheme::DCO, 64, w, 0.04, 0.1);
  EXPECT_NEAR(constraint_power(Scheme::DCO, 64, w, 0.04, 0.1), mean_transmit_power(wf), 1e-17);
  const std::vector<double> wa(16, 0.01);
  const auto wfa = WaveformConfig::from_levels(Scheme::ACO, 64, wa, 0.0, 0.05);
  EXPECT_NEAR(constraint_power(Scheme::ACO, 64, wa, 0.0, 0.05), mean_transmit_power(wfa), 1e-17);
  EXPECT_THROW(constraint_power(Scheme::DCO, 64, w, 0.2, 0.1), std::invalid_argument);
  EXPECT_EQ(constraint_power(Scheme::DCO, 64, std::vector<double>(31, 0.0), 0.03, 0.1), 0.03);
}

TEST(Constraint, ClipFreeRegimes) {
  // Tiny swing: DCO power is the bias, ACO power is sigma_y / sqrt(2 pi).
  const std::vector<double> w(31, 1e-6);
  EXPECT_NEAR(constraint_power(Scheme::DCO, 64, w, 0.05, 0.1) / 0.05, 1.0, 1e-12);
  const std::vector<double> wa(16, 1e-6);
  const double sy = std::sqrt(32.0) * 1e-6;
  EXPECT_NEAR(constraint_power(Scheme::ACO, 64, wa, 0.0, 0.1) / (sy * kInvSqrt2Pi), 1.0, 1e-12);
}

TEST(Constraint, MatchesMonteCarloOfOfdmFrames) {
  // 10^6 time samples of 4-QAM OFDM frames through the clipper.
  for (Scheme s : {Scheme::DCO, Scheme::ACO})
    for (auto [w, bias, peak] : {std::tuple{0.004, 0.03, 0.1}, std::tuple{0.01, 0.05, 0.1},
                                 std::tuple{0.02, 0.3, 0.5}}) {
      auto wf = WaveformConfig::from_levels(s, 64, std::vector<double>(WaveformConfig::data_count(s, 64), w),
                                            bias, peak);
      Rng rng(substream_seed(31, static_cast<std::uint64_t>(w * 1e4)));
      const FourierPlan plan(64);
      double acc = 0.0;
      const int frames = 15625;
      for (int f = 0; f < frames; ++f)
        for (double v : clip(wf, modulate(make_frame(wf, Constellation::Qam4, rng), plan)).y_hat) acc += v;
      const double mc = acc / (64.0 * frames);
      EXPECT_NEAR(mc / constraint_power(s, 64, wf.weights, s == Scheme::DCO ? bias : 0.0, peak), 1.0, 5e-3)
          << to_string(s) << " w=" << w;
    }
}

TEST(Uniform, FeasibleAndEqualWeights) {
  for (Scheme s : {Scheme::DCO, Scheme::ACO})
    for (double pk : {0.05, 0.3}) {
      const auto p = problem(s, pk);
      const auto sol = uniform_allocate(p);
      ASSERT_TRUE(sol.feasible);
      EXPECT_EQ(sol.method, Method::Uniform);
      EXPECT_LE(sol.power, p.power_limit + 1e-9);
      for (double w : sol.weights) EXPECT_EQ(w, sol.weights[0]);
      if (s == Scheme::DCO) {
        EXPECT_GT(sol.bias, 0.0);
        EXPECT_LT(sol.bias, pk);
      }
      EXPECT_NEAR(sol.total_rate, allocation_rate(p, sol.weights, sol.bias), 1e-9);
    }
}

TEST(Uniform, RefinementNeverHurts) {
  for (Scheme s : {Scheme::DCO, Scheme::ACO}) {
    const auto p = problem(s, 0.1);
    double prev = -1.0;
    for (std::size_t levels = 0; levels <= 3; ++levels) {
      const double r = uniform_allocate(p, UniformSearch{60, levels, 0}).total_rate;
      EXPECT_GE(r, prev - 1e-12) << levels;
      prev = r;
    }
    EXPECT_GE(uniform_allocate(p, UniformSearch{60, 3, 4}).total_rate, prev - 1e-12);
  }
}

TEST(Uniform, VanishingPowerGivesVanishingRate) {
  const double r_small = uniform_allocate(problem(Scheme::DCO, 0.1, 0.0, 1e-9)).total_rate;
  const double r_big = uniform_allocate(problem(Scheme::DCO, 0.1)).total_rate;
  EXPECT_LT(r_small, 1e-3 * r_big);
  EXPECT_THROW(uniform_allocate(problem(Scheme::ACO, 0.1, 0.0, 0.0)), std::invalid_argument);
  EXPECT_THROW(uniform_allocate(problem(Scheme::ACO, 0.1), UniformSearch{20, 1, 1}), std::invalid_argument);
}

TEST(Uniform, RateGrowsWithPeak) {
  for (Scheme s : {Scheme::DCO, Scheme::ACO}) {
    double prev = 0.0;
    for (double pk : {0.05, 0.1, 0.2, 0.4}) {
      const double r = uniform_allocate(problem(s, pk)).total_rate;
      EXPECT_GT(r, prev - 1e-6);
      prev = r;
    }
  }
}

TEST(Uniform, CalibrationRecoversFrozenAlpha) {
  EXPECT_NEAR(calibrate_alpha(problem(Scheme::DCO, 0.1), 94.108) / kTable2AlphaDco, 1.0, 1e-6);
  EXPECT_NEAR(calibrate_alpha(problem(Scheme::ACO, 0.1), 72.644) / kTable2AlphaAco, 1.0, 1e-6);
  EXPECT_THROW(calibrate_alpha(problem(Scheme::DCO, 0.1), 1e6), std::runtime_error);
}

TEST(Ga, DeterministicGivenSeed) {
  const auto p = problem(Scheme::DCO, 0.1);
  const auto a = ga_allocate(p, small_ga(), 9);
  const auto b = ga_allocate(p, small_ga(), 9);
  EXPECT_EQ(a.solution.weights, b.solution.weights);
  EXPECT_EQ(a.solution.bias, b.solution.bias);
  EXPECT_EQ(a.best_per_generation, b.best_per_generation);
  const auto c = ga_allocate(p, small_ga(), 10);
  EXPECT_NE(a.solution.weights, c.solution.weights);
}

TEST(Ga, IndependentOfWorkerCount) {
  const auto p = problem(Scheme::ACO, 0.1);
  auto g = small_ga();
  const auto a = ga_allocate(p, g, 3);
  g.workers = 3;
  const auto b = ga_allocate(p, g, 3);
  EXPECT_EQ(a.solution.weights, b.solution.weights);
  EXPECT_EQ(a.best_per_generation, b.best_per_generation);
}

TEST(Ga, NeverWorseThanInitialBestAndFeasible) {
  for (Scheme s : {Scheme::DCO, Scheme::ACO}) {
    const auto p = problem(s, 0.1);
    auto g = small_ga();
    g.upper = 0.01;
    g.bias_upper = 0.1;
    const auto r = ga_allocate(p, g, 4);
    ASSERT_TRUE(r.solution.feasible);
    EXPECT_GE(r.solution.total_rate, r.initial_best);
    EXPECT_EQ(r.best_per_generation.size(), g.generations + 1);
    EXPECT_TRUE(std::is_sorted(r.best_per_generation.begin(), r.best_per_generation.end()));
    EXPECT_LE(r.solution.power, p.power_limit + 1e-9);
    EXPECT_NEAR(r.solution.power, constraint_power(s, 64, r.solution.weights, r.solution.bias, p.peak), 1e-15);
    if (s == Scheme::DCO) {
      EXPECT_GT(r.solution.bias, 0.0);
      EXPECT_LT(r.solution.bias, p.peak);
    }
    for (double w : r.solution.weights) {
      EXPECT_GE(w, 0.0);
      EXPECT_LE(w, g.upper);
    }
  }
}

TEST(Ga, ReachesUniformOnPowerScaledDomain) {
  auto g = small_ga();
  g.population = 200;
  g.generations = 40;
  g.upper = 0.1 / std::sqrt(62.0);
  g.bias_upper = 0.1;
  const auto p = problem(Scheme::DCO, 0.1);
  const double u = uniform_allocate(p).total_rate;
  EXPECT_GT(ga_allocate(p, g, 12).solution.total_rate, 0.99 * u);
}

TEST(Ga, ReportsInfeasibleProblem) {
  // With a 1 nW budget no bias on the 20-bit grid over [0, 0.5] is admissible.
  const auto p = problem(Scheme::DCO, 0.1, 0.0, 1e-9);
  auto g = small_ga();
  g.init_attempts = 3;
  const auto r = ga_allocate(p, g, 1);
  EXPECT_FALSE(r.solution.feasible);
  EXPECT_EQ(r.init_draws, 3u);
  EXPECT_TRUE(r.best_per_generation.empty());
}

TEST(Ga, ParameterValidation) {
  const auto p = problem(Scheme::DCO, 0.1);
  auto g = small_ga();
  g.population = 7;
  EXPECT_THROW(ga_allocate(p, g, 1), std::invalid_argument);
  g = small_ga();
  g.selection_pressure = 2.5;
  EXPECT_THROW(ga_allocate(p, g, 1), std::invalid_argument);
  g = small_ga();
  g.generation_gap = 0.0;
  EXPECT_THROW(ga_allocate(p, g, 1), std::invalid_argument);
  g = small_ga();
  g.upper = 0.0;
  EXPECT_THROW(ga_allocate(p, g, 1), std::invalid_argument);
}

TEST(Ga, RankFitnessIsLinear) {
  const auto f = detail::rank_fitness({5.0, -1.0, 3.0, 3.0, 10.0}, 2.0);
  EXPECT_DOUBLE_EQ(f[1], 0.0);
  EXPECT_DOUBLE_EQ(f[4], 2.0);
  EXPECT_DOUBLE_EQ(f[2], f[3]);
  EXPECT_DOUBLE_EQ(f[2], 0.75);
  double total = 0.0;
  for (double v : f) total += v;
  EXPECT_DOUBLE_EQ(total, 5.0);
}

TEST(Ga, SusMatchesExpectedCounts) {
  Rng rng(2);
  const std::vector<double> fit{0.0, 1.0, 3.0};
  const auto sel = detail::sus(fit, 8, rng);
  ASSERT_EQ(sel.size(), 8u);
  const auto twos = std::count(sel.begin(), sel.end(), 2u);
  EXPECT_EQ(twos, 6);
  EXPECT_EQ(std::count(sel.begin(), sel.end(), 0u), 0);
}

TEST(Ga, ObjectivePenalisesViolation) {
  const auto p = problem(Scheme::DCO, 0.1);
  std::vector<double> v(32, 0.003);
  v[31] = 0.05;
  bool feasible = false;
  EXPECT_GT(detail::ga_objective(p, v, &feasible), 0.0);
  EXPECT_TRUE(feasible);
  v[31] = 0.099;
  std::fill(v.begin(), v.begin() + 31, 0.0001);
  const auto tight = problem(Scheme::DCO, 0.1, 0.0, 0.05);
  EXPECT_NEAR(detail::ga_objective(tight, v, &feasible),
              -detail::kInfeasiblePenalty * (constraint_power(Scheme::DCO, 64, {v.begin(), v.begin() + 31}, 0.099, 0.1) - 0.05),
              1e-6);
  EXPECT_FALSE(feasible);
  v[31] = 0.2;
  EXPECT_LT(detail::ga_objective(p, v, &feasible), 0.0);
}

TEST(Witness, DcoValue) {
  const auto r = nonconvexity_witness_dco(2.0, 1.0);
  EXPECT_NEAR(r.closed_form, -0.2419707245191433, 1e-15);
  EXPECT_TRUE(r.agree(1e-4));
  EXPECT_NEAR(r.exact_closed_form, 0.0, 1e-15);
  EXPECT_NEAR(r.exact_finite_difference, 0.0, 1e-6);
}

TEST(Witness, DcoLinearInSigma) {
  for (double et : {1.5, 3.0, 5.0}) {
    const auto a = nonconvexity_witness_dco(et, 1.0);
    const auto b = nonconvexity_witness_dco(et, 3.0);
    EXPECT_NEAR(b.closed_form, 3.0 * a.closed_form, 1e-14);
    EXPECT_TRUE(a.agree(1e-4)) << et;
    EXPECT_LT(a.closed_form, 0.0);
    EXPECT_NEAR(a.exact_finite_difference, a.exact_closed_form, 1e-6);
  }
  EXPECT_THROW(nonconvexity_witness_dco(1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(nonconvexity_witness_dco(2.0, 0.0), std::invalid_argument);
}

TEST(Witness, AcoNegativeAndChecked) {
  std::vector<double> w(16, 0.0);
  for (double pk : {0.1, 0.5, 1.0, 2.0})
    for (double wj : {0.05, 0.2, 1.0, 3.0}) {
      w[5] = wj;
      const auto r = nonconvexity_witness_aco(pk, w, 5);
      EXPECT_LT(r.closed_form, 0.0);
      EXPECT_TRUE(r.agree(1e-4)) << pk << " " << wj;
    }
  w[2] = 0.1;
  EXPECT_THROW(nonconvexity_witness_aco(1.0, w, 5), std::invalid_argument);
  EXPECT_THROW(nonconvexity_witness_aco(1.0, std::vector<double>(16, 0.0), 5), std::invalid_argument);
  EXPECT_THROW(nonconvexity_witness_aco(0.0, std::vector<double>(16, 0.0), 5), std::invalid_argument);
}

TEST(Witness, AcoSlopeLimits) {
  EXPECT_DOUBLE_EQ(aco_power_slope(1.0, 0.0), kInvSqrt2Pi);
  EXPECT_NEAR(aco_power_slope(1.0, 1e-3), kInvSqrt2Pi, 1e-15);
  EXPECT_NEAR(aco_power_slope(1e-9, 1e3), 0.0, 1e-12);
}
