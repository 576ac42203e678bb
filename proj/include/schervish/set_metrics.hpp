#pragma once

// Thresholded, cost-weighted and prior-adjusted set metrics.
//
// Every metric is (1/W) * sum_i w_i V(y_i, yhat_i) with W the reference weight
// of the evaluation set, a value matrix V that rewards only correct
// decisions, and a decision rule that either thresholds the raw score or the
// prior-adjusted score.

#include <string_view>
#include <vector>

#include "schervish/dataset.hpp"
#include "schervish/odds.hpp"

namespace schervish {

/// Rewards for correct decisions; both kinds of error are worth 0.
struct ValueMatrix {
  double true_positive = 1.0;
  double true_negative = 1.0;
};

enum class MetricKind {
  Accuracy,
  BalancedAccuracy,
  NetBenefit,
  WeightedAccuracy,
  PAMA,
  PAMNB,
  PAMWA,
};

std::string_view to_string(MetricKind kind);
MetricKind parse_metric_kind(std::string_view name);

/// Parameters for one set metric. Fields a kind does not use are ignored.
struct MetricRequest {
  MetricKind kind = MetricKind::Accuracy;
  double tau = 0.5;
  double c = 0.5;
  Prevalence pi = 0.5;

  /// Throws std::invalid_argument unless tau and c lie in (0,1).
  void validate() const;
};

/// Contribution of one row: the metric is sum(weight * value) / sum(weight).
struct WeightedLoss {
  double loss = 0.0;
  double weight = 0.0;
};

double accuracy(const Dataset& d, double tau);

/// True positives count 1, true negatives c/(1-c).
double net_benefit(const Dataset& d, double tau, double c);

/// Normalized so that a perfect classifier scores 1.
double weighted_accuracy(const Dataset& d, double tau, double c);

/// Prior-adjusted maximum accuracy at deployment prevalence pi. The decision
/// is pi ⊗ s_1/2 >= tau; tau = 1/2 is the optimal adjusted threshold.
double pama(const Dataset& d, const Prevalence& pi, double tau = 0.5);

/// Prior-adjusted maximum net benefit, thresholded at the cost ratio c.
double pamnb(const Dataset& d, const Prevalence& pi, double c);

/// Prior-adjusted maximum weighted accuracy, computed as
/// pama(d, (1-c) ⊗ pi, tau).
double pamwa(const Dataset& d, const Prevalence& pi, double tau, double c);

double balanced_accuracy(const Dataset& d, double tau);
double balanced_net_benefit(const Dataset& d, double c);
double balanced_weighted_accuracy(const Dataset& d, double tau, double c);

/// Dispatch on request.kind.
double evaluate(const Dataset& d, const MetricRequest& request);

/// Per-row terms whose weighted mean reproduces evaluate(d, request) when the
/// prevalence is the empirical one.
std::vector<WeightedLoss> contributions(const Dataset& d, const MetricRequest& request);

/// The value matrix a request applies on the rows of d.
/// Weighted accuracy is normalized by the weighted class mix of d.
ValueMatrix value_matrix(const Dataset& d, const MetricRequest& request);

}  // namespace schervish
