#include "schervish/scores.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "schervish/summation.hpp"

namespace schervish {

namespace {

void require_cost(double c) {
  if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("c must lie in (0,1)");
}

// log-distance of the clipped forecast from the wrong label, minus the same
// for the best forecast in the clip range. Nonnegative.
double log_term(double lo, double hi, double q, int y) {
  const double miss = 1.0 - y;
  return std::log(std::abs(miss - clip(lo, hi, q))) - std::log(std::abs(miss - clip(lo, hi, miss)));
}

double brier_term(double lo, double hi, double q, int y) {
  const double best = clip(lo, hi, 1.0 - y) - y;
  const double got = clip(lo, hi, q) - y;
  return best * best - got * got;
}

ScoreReport assemble(const Dataset& d, const Dataset& shifted, std::vector<WeightedLoss> rows, double gamma,
                     double width) {
  CompensatedSum num, den;
  for (const WeightedLoss& r : rows) {
    num += r.weight * r.loss;
    den += r.weight;
  }
  ScoreReport out;
  out.gamma = gamma;
  out.normalizer = den.value() / d.reference_weight();
  out.logit_width = width;
  out.value = gamma * num.value() / shifted.reference_weight();
  out.per_sample = std::move(rows);
  return out;
}

}  // namespace

void PrevalenceInterval::validate() const {
  if (!(a > 0.0 && a < b && b < 1.0)) {
    throw std::invalid_argument("prevalence interval needs 0 < a < b < 1");
  }
}

double PrevalenceInterval::logit_width() const { return logit(b) - logit(a); }

std::string_view to_string(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::BoundedBrier: return "bounded-brier";
    case ScoreKind::BoundedLog: return "bounded-log";
    case ScoreKind::DcaLog: return "dca-log";
    case ScoreKind::WaLog: return "wa-log";
  }
  return "unknown";
}

ScoreKind parse_score_kind(std::string_view name) {
  constexpr std::array kinds = {ScoreKind::BoundedBrier, ScoreKind::BoundedLog, ScoreKind::DcaLog, ScoreKind::WaLog};
  for (ScoreKind k : kinds) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown scoring rule '" + std::string(name) + "'");
}

ScoreReport score_report(const Dataset& d, ScoreKind kind, const PrevalenceInterval& iv, double c) {
  iv.validate();
  const double width = iv.logit_width();
  double lo = 1.0 - iv.b;
  double hi = 1.0 - iv.a;
  double gamma = 1.0;
  // D_1/2 for everything except the net-benefit rule, which lives on D_{1-c}.
  Prevalence target(0.5);
  switch (kind) {
    case ScoreKind::BoundedBrier:
      break;
    case ScoreKind::BoundedLog:
      gamma = 2.0;
      break;
    case ScoreKind::DcaLog:
      require_cost(c);
      gamma = 1.0 / ((1.0 - c) * width);
      target = Prevalence::from_complement(c);
      break;
    case ScoreKind::WaLog:
      require_cost(c);
      gamma = 2.0;
      lo = odds_mul(c, lo);
      hi = odds_mul(c, hi);
      break;
  }
  const Dataset shifted = reweight(d, target);
  std::vector<WeightedLoss> rows(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const int y = d.labels()[i];
    double q = d.balanced_scores()[i];
    if (kind == ScoreKind::DcaLog && c != 0.5) q = odds_mul(1.0 - c, q);
    const double loss = kind == ScoreKind::BoundedBrier ? brier_term(lo, hi, q, y) : log_term(lo, hi, q, y);
    rows[i] = {loss, shifted.weights()[i]};
  }
  return assemble(d, shifted, std::move(rows), gamma, width);
}

double bounded_brier(const Dataset& d, const PrevalenceInterval& iv) {
  return score_report(d, ScoreKind::BoundedBrier, iv).value;
}

double bounded_log(const Dataset& d, const PrevalenceInterval& iv) {
  return score_report(d, ScoreKind::BoundedLog, iv).value;
}

ScoreReport dca_log(const Dataset& d, const PrevalenceInterval& iv, double c) {
  return score_report(d, ScoreKind::DcaLog, iv, c);
}

double wa_log(const Dataset& d, const PrevalenceInterval& iv, double c) {
  return score_report(d, ScoreKind::WaLog, iv, c).value;
}

std::vector<WeightedLoss> pointwise_losses(const Dataset& d, const PrevalenceInterval& iv, double c) {
  return dca_log(d, iv, c).per_sample;
}

}  // namespace schervish
