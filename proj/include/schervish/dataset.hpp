#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "schervish/odds.hpp"

namespace schervish {

/// One scored, labelled observation.
struct Sample {
  double score = 0.0;
  int label = 0;
  std::string group;  // empty when untagged
  double weight = 1.0;
};

/// Input rejected while reading a dataset. row() is the 1-based data row
/// (header excluded), or 0 when the problem is not tied to a single row.
class DataError : public std::runtime_error {
 public:
  DataError(const std::string& message, std::size_t row = 0);
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// Immutable evaluation set D_{pi0}.
///
/// Rows are stored column-wise. The prevalence pi0 is the weighted fraction of
/// positive rows unless supplied explicitly. reference_weight() is the total
/// weight of the evaluation set before any prior shift; every metric divides
/// by it.
class Dataset {
 public:
  /// Throws DataError on an empty set, a score outside [0,1], a label outside
  /// {0,1}, a nonpositive weight, or a prevalence outside (0,1).
  explicit Dataset(std::span<const Sample> samples, std::optional<double> pi0 = std::nullopt);

  std::size_t size() const noexcept { return scores_.size(); }
  double prevalence() const noexcept { return pi0_; }
  double total_weight() const noexcept { return total_weight_; }
  double reference_weight() const noexcept { return reference_weight_; }

  std::span<const double> scores() const noexcept { return scores_; }
  std::span<const int> labels() const noexcept { return labels_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const std::string> groups() const noexcept { return groups_; }

  /// (1 - pi0) ⊗ s for every row, using the prevalence the scores were
  /// produced under. reweight() carries these over unchanged.
  std::span<const double> balanced_scores() const;

  bool has_groups() const noexcept;
  bool has_weights() const noexcept;

  Sample sample(std::size_t i) const;
  std::vector<Sample> samples() const;

  /// Distinct group tags in order of first appearance.
  std::vector<std::string> group_names() const;

  /// Rows tagged `name`, with their own empirical prevalence.
  Dataset subgroup(const std::string& name) const;

  /// Same rows and prevalence, scores replaced.
  Dataset with_scores(std::vector<double> scores) const;

 private:
  Dataset() = default;
  void finish_prevalence(std::optional<double> pi0);

  friend Dataset reweight(const Dataset& d, const Prevalence& pi);

  std::vector<double> scores_;
  std::vector<int> labels_;
  std::vector<std::string> groups_;
  std::vector<double> weights_;
  std::vector<double> balanced_;
  double pi0_ = 0.0;
  double total_weight_ = 0.0;
  double reference_weight_ = 0.0;
};

/// Weighted mean of the labels.
double empirical_prevalence(const Dataset& d);

/// Importance-reweight to prevalence pi: each weight is multiplied by
/// W(pi0 -> pi; y) and the result carries pi as its prevalence. The
/// reference weight is unchanged. At pi in {0,1} one class is zero-weighted.
Dataset reweight(const Dataset& d, const Prevalence& pi);

/// Reads `score,label[,group][,weight]` CSV (header required, any column
/// order, LF or CRLF). Throws DataError with the offending row.
Dataset load_csv(std::istream& in, std::optional<double> pi0 = std::nullopt);
Dataset load_csv_file(const std::string& path, std::optional<double> pi0 = std::nullopt);

/// Writes the header plus one row per sample. Numbers use the shortest
/// representation that parses back to the same double. The group column is
/// written when any row is tagged, the weight column when any weight != 1.
void write_csv(std::ostream& out, const Dataset& d);

/// Shortest round-trip decimal form of x.
std::string format_double(double x);

/// Synthetic data under label shift: y ~ Bernoulli(pi0), x | y ~ N(mu_y,
/// sigma), and the emitted score is sigmoid(slope * logit P(y=1|x) +
/// intercept), where P(y=1|x) is the exact Bayes posterior.
struct GeneratorSpec {
  std::size_t n = 1000;
  double pi0 = 0.5;
  double mu0 = 0.0;
  double mu1 = 1.0;
  double sigma = 1.0;
  double calib_slope = 1.0;
  double calib_intercept = 0.0;
  std::uint64_t seed = 0;
  std::string group;

  /// Throws std::invalid_argument on n < 2, sigma <= 0 or pi0 outside (0,1).
  void validate() const;
};

/// Deterministic given spec.seed. Throws DataError if the draw contains
/// only one class.
Dataset generate(const GeneratorSpec& spec);

/// Rows of several datasets in order; prevalence recomputed from the union.
Dataset concatenate(std::span<const Dataset> parts);

}  // namespace schervish
