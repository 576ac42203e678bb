#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "schervish/bootstrap.hpp"
#include "schervish/ranking.hpp"

using namespace schervish;

namespace {

std::vector<WeightedLoss> normal_losses(std::mt19937_64& rng, std::size_t n, double mu = 1.0, double sd = 0.1) {
  std::normal_distribution<double> g(mu, sd);
  std::vector<WeightedLoss> out(n);
  for (auto& x : out) x = {g(rng), 1.0};
  return out;
}

BootstrapSpec spec(std::size_t reps, std::uint64_t seed, unsigned threads = 1) {
  BootstrapSpec s;
  s.replicates = reps;
  s.seed = seed;
  s.threads = threads;
  return s;
}

}  // namespace

TEST(Quantile, Type7) {
  std::vector<double> v{4, 1, 3, 2};
  EXPECT_EQ(quantile(v, 0.0), 1.0);
  EXPECT_EQ(quantile(v, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile(v, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile(v, 0.25), 1.75);
}

TEST(Bootstrap, ConstantLossesHaveZeroWidth) {
  const std::vector<WeightedLoss> same(50, WeightedLoss{0.7, 2.0});
  const ConfidenceInterval ci = bootstrap_ci(same, 3.0, spec(200, 1));
  EXPECT_DOUBLE_EQ(ci.point, 2.1);
  EXPECT_DOUBLE_EQ(ci.lo, ci.point);
  EXPECT_DOUBLE_EQ(ci.hi, ci.point);
}

TEST(Bootstrap, DeterministicAcrossThreads) {
  std::mt19937_64 rng(71);
  const auto losses = normal_losses(rng, 300);
  const ConfidenceInterval a = bootstrap_ci(losses, 1.0, spec(500, 9, 1));
  const ConfidenceInterval b = bootstrap_ci(losses, 1.0, spec(500, 9, 1));
  const ConfidenceInterval c = bootstrap_ci(losses, 1.0, spec(500, 9, 4));
  EXPECT_EQ(a.lo, b.lo);
  EXPECT_EQ(a.hi, b.hi);
  EXPECT_EQ(a.lo, c.lo);
  EXPECT_EQ(a.hi, c.hi);
  EXPECT_LE(a.lo, a.hi);
  const ConfidenceInterval other = bootstrap_ci(losses, 1.0, spec(500, 10));
  EXPECT_NE(a.lo, other.lo);
}

TEST(Bootstrap, Coverage) {
  std::mt19937_64 rng(72);
  int covered = 0;
  const int reps = 200;
  for (int k = 0; k < reps; ++k) {
    const auto losses = normal_losses(rng, 400);
    const ConfidenceInterval ci = bootstrap_ci(losses, 1.0, spec(1000, 100 + k));
    if (ci.lo <= 1.0 && 1.0 <= ci.hi) ++covered;
  }
  const double rate = static_cast<double>(covered) / reps;
  RecordProperty("coverage", std::to_string(rate));
  EXPECT_GE(rate, 0.90);
  EXPECT_LE(rate, 0.99);
}

TEST(Bootstrap, WidthShrinksLikeRootN) {
  std::mt19937_64 rng(73);
  double prev = 0.0;
  for (std::size_t n : {100, 400, 1600}) {
    double width = 0.0;
    for (int k = 0; k < 10; ++k) {
      const ConfidenceInterval ci = bootstrap_ci(normal_losses(rng, n), 1.0, spec(1000, k));
      width += (ci.hi - ci.lo) / 10;
    }
    if (prev > 0.0) EXPECT_NEAR(width / prev, 0.5, 0.5 * 0.25);
    prev = width;
  }
}

TEST(Bootstrap, WeightsActLikeDuplication) {
  // Scaling every weight by 4 changes nothing; a 4x duplicated sample gives a
  // narrower interval, so only weights are compared here.
  std::mt19937_64 rng(74);
  const auto losses = normal_losses(rng, 400);
  auto heavy = losses;
  for (auto& x : heavy) x.weight *= 4.0;
  const ConfidenceInterval a = bootstrap_ci(losses, 1.0, spec(1000, 3));
  const ConfidenceInterval b = bootstrap_ci(heavy, 1.0, spec(1000, 3));
  EXPECT_NEAR(b.hi - b.lo, a.hi - a.lo, 0.3 * (a.hi - a.lo));
}

TEST(Bootstrap, ContrastsShareDraws) {
  std::mt19937_64 rng(75);
  Stratum s;
  s.columns.push_back(normal_losses(rng, 200));
  s.columns.push_back(s.columns[0]);
  const std::vector<Stratum> strata{s};
  const std::vector<Contrast> contrasts{{Term{0, 0, 1.0}, Term{0, 1, -1.0}}, {Term{0, 0, 2.0}}};
  const auto cis = bootstrap_contrasts(strata, contrasts, spec(300, 4));
  EXPECT_EQ(cis[0].lo, 0.0);
  EXPECT_EQ(cis[0].hi, 0.0);
  EXPECT_GT(cis[1].hi, cis[1].lo);
  const std::vector<Contrast> broken{{Term{1, 0, 1.0}}};
  EXPECT_THROW(bootstrap_contrasts(strata, broken, spec(300, 4)), std::invalid_argument);
}

TEST(Bootstrap, RecomputeAuc) {
  std::mt19937_64 rng(76);
  const Dataset d = fixtures::random_dataset(rng, 200);
  auto stat = [](const Dataset& x) { return auc_roc(x).auc; };
  const ConfidenceInterval a = bootstrap_recompute(d, stat, spec(200, 5, 1));
  const ConfidenceInterval b = bootstrap_recompute(d, stat, spec(200, 5, 3));
  EXPECT_EQ(a.lo, b.lo);
  EXPECT_EQ(a.hi, b.hi);
  EXPECT_EQ(a.point, auc_roc(d).auc);
  EXPECT_LT(a.lo, a.point);
  EXPECT_GT(a.hi, a.point);
}

TEST(Bootstrap, Validation) {
  const std::vector<WeightedLoss> one{{1.0, 1.0}};
  EXPECT_THROW(bootstrap_ci(one, 1.0, spec(99, 0)), std::invalid_argument);
  BootstrapSpec bad = spec(200, 0);
  bad.level = 1.0;
  EXPECT_THROW(bootstrap_ci(one, 1.0, bad), std::invalid_argument);
  EXPECT_THROW(bootstrap_ci({}, 1.0, spec(200, 0)), std::invalid_argument);
}
