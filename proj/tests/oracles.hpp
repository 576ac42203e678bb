#pragma once

// Slow, direct reimplementations used to check the library.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "schervish/dataset.hpp"

namespace oracle {

using schervish::Dataset;

/// All (negative, positive) pairs, weights multiplied. O(n^2).
double auc_pairs(const Dataset& d);

/// Isotonic fit by brute force: every split of the pooled-score blocks into
/// consecutive segments, keeping the feasible one with least weighted
/// squared error. Returns the fitted level of each distinct score (in
/// increasing score order). Needs at most 20 distinct scores.
std::vector<double> isotonic_exhaustive(const Dataset& d);

/// PAMA from the odds-ratio form of the adjusted decision.
double pama_direct(const Dataset& d, double pi, double tau);

/// PAMWA as a ratio of cost-and-prior weighted sums.
double pamwa_ratio(const Dataset& d, double pi, double tau, double c);

/// (TPR + TNR) / 2 with the balanced score thresholded at tau.
double balanced_accuracy_rates(const Dataset& d, double tau);

/// Plain composite trapezoid rule on n equally spaced points.
double trapezoid(const std::function<double(double)>& f, double lo, double hi, std::size_t n);

}  // namespace oracle

namespace fixtures {

using schervish::Dataset;

/// [(0.2,0),(0.4,1),(0.6,0),(0.8,1)]
Dataset d4();
/// Four rows at 0.25 with one positive, four at 0.75 with three positives.
Dataset d8();

enum class Labels { Calibrated, Miscalibrated };

/// n rows, scores uniform on [0,1]; labels Bernoulli(score) or Bernoulli of
/// a distorted score. Redraws until both classes appear.
Dataset random_dataset(std::mt19937_64& rng, std::size_t n, Labels labels = Labels::Calibrated,
                       bool weighted = false);

/// Scores drawn from a handful of values so ties are common.
Dataset tied_dataset(std::mt19937_64& rng, std::size_t n, std::size_t distinct, bool weighted);

/// Distinct score values k/den with integer positive/negative counts chosen
/// so each value's positive fraction equals the score exactly.
Dataset calibrated_table(std::mt19937_64& rng);

}  // namespace fixtures
