#include "schervish/set_metrics.hpp"

#include <array>
#include <stdexcept>
#include <string>

#include "schervish/summation.hpp"

namespace schervish {

namespace {

void require_open(double x, const char* what) {
  if (!(x > 0.0 && x < 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in (0,1)");
  }
}

// Predict positive iff the (raw or balanced) score reaches `cut`.
struct DecisionRule {
  bool adjusted = false;
  double cut = 0.5;

  int predict(const Dataset& d, std::size_t i) const {
    const double s = adjusted ? d.balanced_scores()[i] : d.scores()[i];
    return s >= cut ? 1 : 0;
  }
};

struct Tally {
  double true_positive = 0.0;  // weight of correctly predicted positives
  double true_negative = 0.0;
  double positive = 0.0;       // total positive weight
  double negative = 0.0;
};

Tally tally(const Dataset& d, const DecisionRule& rule) {
  CompensatedSum tp, tn, pos, neg;
  const auto labels = d.labels();
  const auto weights = d.weights();
  const auto scores = rule.adjusted ? d.balanced_scores() : d.scores();
  for (std::size_t i = 0; i < d.size(); ++i) {
    const bool predicted = scores[i] >= rule.cut;
    if (labels[i] == 1) {
      pos += weights[i];
      if (predicted) tp += weights[i];
    } else {
      neg += weights[i];
      if (!predicted) tn += weights[i];
    }
  }
  return {tp.value(), tn.value(), pos.value(), neg.value()};
}

double score(const Dataset& d, const DecisionRule& rule, const ValueMatrix& v) {
  const Tally t = tally(d, rule);
  return (v.true_positive * t.true_positive + v.true_negative * t.true_negative) / d.reference_weight();
}

Prevalence cost_shifted(const Prevalence& pi, double c) {
  return odds_mul(Prevalence::from_complement(c), pi);
}

ValueMatrix prior_adjusted_values(const Dataset& d, const Prevalence& pi, double negative_scale) {
  return {importance_weight(d.prevalence(), pi, 1), negative_scale * importance_weight(d.prevalence(), pi, 0)};
}

DecisionRule rule_for(const Dataset& d, const MetricRequest& r) {
  switch (r.kind) {
    case MetricKind::Accuracy:
    case MetricKind::NetBenefit:
    case MetricKind::WeightedAccuracy:
      return {false, r.tau};
    case MetricKind::BalancedAccuracy:
      return {true, balanced_threshold(Prevalence(0.5), r.tau)};
    case MetricKind::PAMA:
      return {true, balanced_threshold(r.pi, r.tau)};
    case MetricKind::PAMNB:
      return {true, balanced_threshold(r.pi, r.c)};
    case MetricKind::PAMWA:
      return {true, balanced_threshold(cost_shifted(r.pi, r.c), r.tau)};
  }
  (void)d;
  throw std::logic_error("unhandled metric kind");
}

}  // namespace

std::string_view to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::Accuracy: return "accuracy";
    case MetricKind::BalancedAccuracy: return "balanced-accuracy";
    case MetricKind::NetBenefit: return "net-benefit";
    case MetricKind::WeightedAccuracy: return "weighted-accuracy";
    case MetricKind::PAMA: return "pama";
    case MetricKind::PAMNB: return "pamnb";
    case MetricKind::PAMWA: return "pamwa";
  }
  return "unknown";
}

MetricKind parse_metric_kind(std::string_view name) {
  constexpr std::array kinds = {MetricKind::Accuracy, MetricKind::BalancedAccuracy, MetricKind::NetBenefit,
                                MetricKind::WeightedAccuracy, MetricKind::PAMA, MetricKind::PAMNB,
                                MetricKind::PAMWA};
  for (MetricKind k : kinds) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown set metric '" + std::string(name) + "'");
}

void MetricRequest::validate() const {
  require_open(tau, "tau");
  require_open(c, "c");
}

double accuracy(const Dataset& d, double tau) {
  return score(d, {false, tau}, {1.0, 1.0});
}

double net_benefit(const Dataset& d, double tau, double c) {
  require_open(c, "c");
  return score(d, {false, tau}, {1.0, c / (1.0 - c)});
}

double weighted_accuracy(const Dataset& d, double tau, double c) {
  require_open(c, "c");
  const Tally t = tally(d, {false, tau});
  return ((1.0 - c) * t.true_positive + c * t.true_negative) / ((1.0 - c) * t.positive + c * t.negative);
}

double pama(const Dataset& d, const Prevalence& pi, double tau) {
  require_open(tau, "tau");
  return score(d, {true, balanced_threshold(pi, tau)}, prior_adjusted_values(d, pi, 1.0));
}

double pamnb(const Dataset& d, const Prevalence& pi, double c) {
  require_open(c, "c");
  return score(d, {true, balanced_threshold(pi, c)}, prior_adjusted_values(d, pi, c / (1.0 - c)));
}

double pamwa(const Dataset& d, const Prevalence& pi, double tau, double c) {
  require_open(c, "c");
  return pama(d, cost_shifted(pi, c), tau);
}

double balanced_accuracy(const Dataset& d, double tau) { return pama(d, Prevalence(0.5), tau); }

double balanced_net_benefit(const Dataset& d, double c) { return pamnb(d, Prevalence(0.5), c); }

double balanced_weighted_accuracy(const Dataset& d, double tau, double c) {
  return pamwa(d, Prevalence(0.5), tau, c);
}

double evaluate(const Dataset& d, const MetricRequest& r) {
  r.validate();
  switch (r.kind) {
    case MetricKind::Accuracy: return accuracy(d, r.tau);
    case MetricKind::BalancedAccuracy: return balanced_accuracy(d, r.tau);
    case MetricKind::NetBenefit: return net_benefit(d, r.tau, r.c);
    case MetricKind::WeightedAccuracy: return weighted_accuracy(d, r.tau, r.c);
    case MetricKind::PAMA: return pama(d, r.pi, r.tau);
    case MetricKind::PAMNB: return pamnb(d, r.pi, r.c);
    case MetricKind::PAMWA: return pamwa(d, r.pi, r.tau, r.c);
  }
  throw std::logic_error("unhandled metric kind");
}

ValueMatrix value_matrix(const Dataset& d, const MetricRequest& r) {
  r.validate();
  switch (r.kind) {
    case MetricKind::Accuracy:
      return {1.0, 1.0};
    case MetricKind::NetBenefit:
      return {1.0, r.c / (1.0 - r.c)};
    case MetricKind::WeightedAccuracy: {
      const Tally t = tally(d, {false, r.tau});
      const double z = ((1.0 - r.c) * t.positive + r.c * t.negative) / d.reference_weight();
      return {(1.0 - r.c) / z, r.c / z};
    }
    case MetricKind::BalancedAccuracy:
      return prior_adjusted_values(d, Prevalence(0.5), 1.0);
    case MetricKind::PAMA:
      return prior_adjusted_values(d, r.pi, 1.0);
    case MetricKind::PAMNB:
      return prior_adjusted_values(d, r.pi, r.c / (1.0 - r.c));
    case MetricKind::PAMWA:
      return prior_adjusted_values(d, cost_shifted(r.pi, r.c), 1.0);
  }
  throw std::logic_error("unhandled metric kind");
}

std::vector<WeightedLoss> contributions(const Dataset& d, const MetricRequest& r) {
  const ValueMatrix v = value_matrix(d, r);
  const DecisionRule rule = rule_for(d, r);
  std::vector<WeightedLoss> out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const int y = d.labels()[i];
    const bool correct = rule.predict(d, i) == y;
    out[i] = {correct ? (y == 1 ? v.true_positive : v.true_negative) : 0.0, d.weights()[i]};
  }
  return out;
}

}  // namespace schervish
