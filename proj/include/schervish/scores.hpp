#pragma once

// Clipped proper scoring rules. Each one is a closed form for an average of
// a prior-adjusted set metric over a range of deployment prevalences.

#include <string_view>
#include <vector>

#include "schervish/dataset.hpp"
#include "schervish/set_metrics.hpp"

namespace schervish {

/// Deployment prevalences between a and b; the induced distribution puts
/// logit(pi) uniform on (logit a, logit b).
struct PrevalenceInterval {
  double a = 0.05;
  double b = 0.95;

  /// Throws std::invalid_argument unless 0 < a < b < 1.
  void validate() const;
  double logit_width() const;
};

enum class ScoreKind { BoundedBrier, BoundedLog, DcaLog, WaLog };

std::string_view to_string(ScoreKind kind);
ScoreKind parse_score_kind(std::string_view name);

/// value == gamma * normalizer * (weighted mean of per_sample).
///
/// per_sample holds each row's clipped term and its weight after the prior
/// shift the rule is taken under. normalizer is the ratio of that shifted
/// weight to the reference weight (1 when pi0 is the empirical prevalence).
struct ScoreReport {
  double value = 0.0;
  double gamma = 1.0;
  double normalizer = 1.0;
  double logit_width = 0.0;
  std::vector<WeightedLoss> per_sample;
};

/// (b - a) * E_{pi ~ U(a,b)}[PAMA], via squared distances after clipping the
/// balanced score to [1-b, 1-a].
double bounded_brier(const Dataset& d, const PrevalenceInterval& iv);

/// (logit b - logit a) * E_{logit pi}[PAMA], in nats.
double bounded_log(const Dataset& d, const PrevalenceInterval& iv);

/// E_{logit pi}[PAMNB(D_pi, s, c)]: expected net benefit in true-positive
/// equivalents per row. gamma = 1 / ((1-c)(logit b - logit a)).
ScoreReport dca_log(const Dataset& d, const PrevalenceInterval& iv, double c);

/// (logit b - logit a) * E_{logit pi}[PAMWA]; clip bounds are
/// [c ⊗ (1-b), c ⊗ (1-a)].
double wa_log(const Dataset& d, const PrevalenceInterval& iv, double c);

/// Full report for any of the four rules. c is ignored by the first two.
ScoreReport score_report(const Dataset& d, ScoreKind kind, const PrevalenceInterval& iv, double c = 0.5);

/// The per-row terms of dca_log.
std::vector<WeightedLoss> pointwise_losses(const Dataset& d, const PrevalenceInterval& iv, double c);

}  // namespace schervish
