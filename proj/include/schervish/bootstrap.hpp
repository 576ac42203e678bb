#pragma once

// Percentile bootstrap over per-row loss contributions.
//
// Replicate r draws its rows with an RNG seeded from (seed, r) alone, so the
// result does not depend on how replicates are spread over threads.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "schervish/dataset.hpp"
#include "schervish/set_metrics.hpp"

namespace schervish {

struct BootstrapSpec {
  std::size_t replicates = 2000;
  double level = 0.95;
  std::uint64_t seed = 0;
  unsigned threads = 1;  // 0 means one per hardware thread

  /// Throws std::invalid_argument on replicates < 100 or level outside (0,1).
  void validate() const;
};

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 0.0;
  double point = 0.0;
};

/// point = scale * sum(w*l)/sum(w); each replicate resamples rows with
/// replacement, keeping each row's weight.
ConfidenceInterval bootstrap_ci(std::span<const WeightedLoss> losses, double scale, const BootstrapSpec& spec);

/// Rows that are resampled together. Every column has one entry per row;
/// columns are different statistics computed on the same rows.
struct Stratum {
  std::vector<std::vector<WeightedLoss>> columns;
  std::size_t rows() const;
};

/// coef * (weighted mean of strata[stratum].columns[column]).
struct Term {
  std::size_t stratum = 0;
  std::size_t column = 0;
  double coef = 1.0;
};
using Contrast = std::vector<Term>;

/// Percentile intervals for several linear contrasts, resampling each
/// stratum independently and sharing one draw across all contrasts.
std::vector<ConfidenceInterval> bootstrap_contrasts(std::span<const Stratum> strata,
                                                    std::span<const Contrast> contrasts, const BootstrapSpec& spec);

/// Percentile interval for a statistic that must be recomputed on each
/// resampled dataset. Draws that lose a class are redrawn.
ConfidenceInterval bootstrap_recompute(const Dataset& d, const std::function<double(const Dataset&)>& statistic,
                                       const BootstrapSpec& spec);

/// Type-7 (linear interpolation) sample quantile; sorts `values`.
double quantile(std::vector<double>& values, double p);

/// Seed for replicate r of a run seeded with `seed`.
std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t r);

}  // namespace schervish
