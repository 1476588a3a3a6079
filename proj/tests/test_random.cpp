#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "owc/poisson.hpp"
#include "owc/random.hpp"

using namespace owc;

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.bits();
    EXPECT_EQ(x, b.bits());
    differs |= x != c.bits();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, SubstreamSeedsAreDistinct) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t m : {0ull, 1ull, 20240611ull})
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(substream_seed(m, i));
  EXPECT_EQ(seen.size(), 3000u);
  EXPECT_EQ(substream_seed(5, 9), substream_seed(5, 9));
}

TEST(Rng, UniformAndNormalMoments) {
  Rng rng(1);
  const int n = 1000000;
  double su = 0.0, sn = 0.0, sn2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
  }
  EXPECT_NEAR(su / n, 0.5, 5 * std::sqrt(1.0 / 12 / n));
  EXPECT_NEAR(sn / n, 0.0, 5 / std::sqrt(n));
  EXPECT_NEAR(sn2 / n, 1.0, 5 * std::sqrt(2.0 / n));
}

TEST(Rng, BelowIsInRange) {
  Rng rng(2);
  std::vector<int> hist(7);
  for (int i = 0; i < 70000; ++i) {
    const auto v = rng.below(7);
    ASSERT_LT(v, 7u);
    ++hist[v];
  }
  for (int h : hist) EXPECT_NEAR(h, 10000, 500);
}

class PoissonMoments : public ::testing::TestWithParam<double> {};

TEST_P(PoissonMoments, MeanAndVarianceMatch) {
  const double lambda = GetParam();
  Rng rng(substream_seed(99, static_cast<std::uint64_t>(lambda * 1000)));
  const int n = 400000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double k = static_cast<double>(poisson(lambda, rng));
    s += k;
    s2 += k * k;
  }
  const double mean = s / n;
  const double var = s2 / n - mean * mean;
  EXPECT_NEAR(mean, lambda, 5 * std::sqrt(lambda / n));
  // Var of the sample variance is about (2 lambda^2 + lambda) / n.
  EXPECT_NEAR(var, lambda, 5 * std::sqrt((2 * lambda * lambda + lambda) / n));
}

INSTANTIATE_TEST_SUITE_P(Means, PoissonMoments,
                         ::testing::Values(0.001, 0.3, 3.0, 9.99, 10.0, 25.0, 400.0, 1e5));

TEST(Poisson, PmfChiSquare) {
  // Pearson statistic over bins with expected count >= 20; 5-sigma bound on chi2.
  for (double lambda : {4.0, 15.0, 60.0}) {
    Rng rng(substream_seed(7, static_cast<std::uint64_t>(lambda)));
    const int n = 200000;
    std::vector<int> hist(static_cast<std::size_t>(lambda * 4 + 50));
    for (int i = 0; i < n; ++i) {
      const auto k = poisson(lambda, rng);
      if (k < hist.size()) ++hist[k];
    }
    double chi2 = 0.0;
    int dof = 0;
    for (std::size_t k = 0; k < hist.size(); ++k) {
      const double p = std::exp(-lambda + k * std::log(lambda) - std::lgamma(k + 1.0));
      const double e = n * p;
      if (e < 20) continue;
      chi2 += (hist[k] - e) * (hist[k] - e) / e;
      ++dof;
    }
    EXPECT_LT(chi2, dof + 5 * std::sqrt(2.0 * dof)) << lambda;
  }
}

TEST(Poisson, DegenerateMeans) {
  Rng rng(3);
  EXPECT_EQ(poisson(0.0, rng), 0u);
  EXPECT_EQ(poisson(-1.0, rng), 0u);
}
