#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "schervish/odds.hpp"

using namespace schervish;

TEST(OddsMul, Examples) {
  EXPECT_EQ(odds_mul(0.5, 0.3), 0.3);
  EXPECT_NEAR(odds_mul(0.8, 0.8), 0.64 / 0.68, 1e-15);
  for (double a : {0.01, 0.2, 0.5, 0.77, 0.999}) EXPECT_NEAR(odds_mul(a, 1.0 - a), 0.5, 1e-15);
}

TEST(OddsMul, EndpointsByContinuity) {
  EXPECT_EQ(odds_mul(0.3, 0.0), 0.0);
  EXPECT_EQ(odds_mul(0.3, 1.0), 1.0);
  EXPECT_THROW(odds_mul(0.0, 0.5), std::domain_error);
  EXPECT_THROW(odds_mul(1.0, 0.2), std::domain_error);
  EXPECT_THROW(odds_mul(0.3, 1.5), std::domain_error);
}

TEST(OddsMul, PrevalenceKeepsComplement) {
  const Prevalence p = Prevalence::from_complement(0.1);
  EXPECT_EQ(p.complement(), 0.1);
  EXPECT_EQ(odds_mul(Prevalence(0.5), p).complement(), 0.1);
  const Prevalence q = odds_mul(Prevalence(0.8), Prevalence(0.8));
  EXPECT_NEAR(q.value(), 0.64 / 0.68, 1e-15);
  EXPECT_NEAR(q.value() + q.complement(), 1.0, 1e-15);
  EXPECT_THROW(Prevalence(-0.1), std::domain_error);
  EXPECT_THROW(odds_mul(Prevalence(0.0), Prevalence(1.0)), std::domain_error);
}

TEST(Logit, Basics) {
  EXPECT_EQ(logit(0.5), 0.0);
  EXPECT_EQ(sigmoid(0.0), 0.5);
  EXPECT_NEAR(logit(odds_mul(0.8, 0.8)), 2 * logit(0.8), 1e-12);
  EXPECT_THROW(logit(0.0), std::domain_error);
  EXPECT_THROW(logit(1.0), std::domain_error);
  EXPECT_NEAR(sigmoid(-800.0), 0.0, 1e-300);
  EXPECT_EQ(sigmoid(800.0), 1.0);
  for (double p : {1e-9, 0.1, 0.37, 0.9, 1 - 1e-9}) EXPECT_NEAR(sigmoid(logit(p)), p, 1e-15);
}

TEST(Logit, PrevalenceUsesStoredComplement) {
  // 1 - 1e-20 rounds to 1 as a double; the complement form does not.
  EXPECT_NEAR(logit(Prevalence::from_complement(1e-20)), -std::log(1e-20), 1e-12);
  EXPECT_EQ(logit(Prevalence(0.25)), logit(0.25));
  const Prevalence big = odds_mul(Prevalence::from_complement(1e-9), Prevalence::from_complement(1e-9));
  EXPECT_NEAR(logit(big), 2 * logit(Prevalence::from_complement(1e-9)), 1e-9);
  EXPECT_THROW(logit(Prevalence(1.0)), std::domain_error);
}

TEST(Clip, Examples) {
  EXPECT_EQ(clip(0.2, 0.8, 0.5), 0.5);
  EXPECT_EQ(clip(0.2, 0.8, 0.05), 0.2);
  EXPECT_EQ(clip(0.2, 0.8, 0.95), 0.8);
  EXPECT_THROW(clip(0.8, 0.2, 0.5), std::invalid_argument);
  EXPECT_EQ(clip(0.2, 0.8, clip(0.2, 0.8, 0.95)), clip(0.2, 0.8, 0.95));
}

TEST(ImportanceWeight, Examples) {
  EXPECT_EQ(importance_weight(0.5, 0.5, 1), 1.0);
  EXPECT_EQ(importance_weight(0.5, 0.75, 0), 0.5);
  EXPECT_NEAR(importance_weight(0.2, 0.4, 1), 2.0, 1e-15);
  EXPECT_THROW(importance_weight(0.0, 0.4, 1), std::domain_error);
}

TEST(ImportanceWeight, FactorsThroughBalance) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int k = 0; k < 1000; ++k) {
    const double pi0 = u(rng), pi = u(rng);
    for (int y : {0, 1}) {
      const double via_half = importance_weight(pi0, 0.5, y) * 2.0 * std::abs((1.0 - pi) - y);
      EXPECT_NEAR(importance_weight(pi0, pi, y), via_half, 1e-12);
    }
  }
}

TEST(AdjustedScore, Examples) {
  EXPECT_EQ(adjusted_score(0.3, 0.5, 0.5), 0.3);
  EXPECT_NEAR(adjusted_score(0.25, 0.5, 0.75), 0.5, 1e-15);
  EXPECT_EQ(adjusted_score(0.9, 0.5, 0.5), 0.9);
  EXPECT_NEAR(adjusted_score(0.4, 0.2, 0.5), balanced_score(0.4, 0.2), 0);
  EXPECT_THROW(adjusted_score(1.0, 0.5, 0.0), std::domain_error);
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify(0.25, 0.5, 0.75, 0.5), 1);
  EXPECT_EQ(classify(0.9, 0.5, 0.5, 0.5), 1);
  EXPECT_EQ(classify(0.1, 0.5, 0.5, 0.5), 0);
}

TEST(Classify, AgreesWithAdjustedScoreAwayFromTies) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.001, 0.999);
  for (int k = 0; k < 5000; ++k) {
    const double s = u(rng), pi0 = u(rng), pi = u(rng), c = u(rng);
    const double adj = adjusted_score(s, pi0, pi);
    if (std::abs(adj - c) < 1e-9) continue;
    EXPECT_EQ(classify(s, pi0, pi, c), adj >= c ? 1 : 0);
  }
}

TEST(Classify, DegeneratePrevalences) {
  // The balanced-score cut is 0 at pi = 1 and 1 at pi = 0; ties go positive.
  EXPECT_EQ(classify(0.01, 0.3, 1.0, 0.5), 1);
  EXPECT_EQ(classify(0.0, 0.3, 1.0, 0.5), 1);
  EXPECT_EQ(classify(0.99, 0.3, 0.0, 0.5), 0);
  EXPECT_EQ(classify(1.0, 0.3, 0.0, 0.5), 1);
}

TEST(OddsAlgebra, Propositions) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(1e-3, 1 - 1e-3);
  for (int k = 0; k < 20000; ++k) {
    const double a = u(rng), b = u(rng), c = u(rng);
    EXPECT_NEAR(logit(odds_mul(a, b)), logit(a) + logit(b), 1e-10);
    EXPECT_NEAR(1.0 - odds_mul(a, b), odds_mul(1.0 - a, 1.0 - b), 1e-12);
    EXPECT_NEAR(odds_mul(1.0 - a, odds_mul(a, b)), b, 1e-12);
    const double lo = std::min(a, b), hi = std::max(a, b);
    EXPECT_NEAR(logit(odds_mul(1 - c, hi)) - logit(odds_mul(1 - c, lo)), logit(hi) - logit(lo), 1e-10);
  }
}
