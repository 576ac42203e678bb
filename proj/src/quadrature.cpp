#include "schervish/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "schervish/set_metrics.hpp"
#include "schervish/summation.hpp"

namespace schervish {

namespace {

double metric_at(const Dataset& d, AdjustedMetric kind, double u, double c) {
  const Prevalence pi(sigmoid(u));
  switch (kind) {
    case AdjustedMetric::PAMA: return pama(d, pi, 0.5);
    case AdjustedMetric::PAMNB: return pamnb(d, pi, c);
    case AdjustedMetric::PAMWA: return pamwa(d, pi, 0.5, c);
  }
  throw std::logic_error("unhandled metric");
}

// Logit-prevalence values at which some row changes prediction:
// pi ⊗ s_1/2 crosses the threshold where logit pi = logit(thr) - logit(s_1/2).
std::vector<double> breakpoints(const Dataset& d, AdjustedMetric kind, double c, double lo, double hi) {
  const double thr = kind == AdjustedMetric::PAMA ? 0.0 : logit(c);
  std::vector<double> out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double s = balanced_score(d.scores()[i], d.prevalence());
    if (!(s > 0.0 && s < 1.0)) continue;
    const double u = thr - logit(s);
    if (u > lo && u < hi) out.push_back(u);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double nudge(double u) { return 1e-9 * std::max(1.0, std::abs(u)); }

}  // namespace

double quadrature_expectation(const Dataset& d, AdjustedMetric kind, const PrevalenceInterval& iv, double c,
                              std::size_t nodes, PrevalenceMeasure measure) {
  iv.validate();
  if (nodes < 3 || nodes % 2 == 0) {
    throw std::invalid_argument("quadrature needs an odd node count >= 3");
  }
  if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("c must lie in (0,1)");

  const double ua = logit(iv.a);
  const double ub = logit(iv.b);
  const double h = (ub - ua) / static_cast<double>(nodes - 1);

  auto weight = [&](double u) {
    if (measure == PrevalenceMeasure::LogitUniform) return 1.0;
    const double p = sigmoid(u);
    return p * (1.0 - p);
  };
  auto f = [&](double u) { return metric_at(d, kind, u, c) * weight(u); };

  // Piece boundaries: interval ends plus breakpoints, merged when closer than
  // a few nudges so no piece is narrower than the nudge itself.
  std::vector<double> cuts{ua};
  for (double u : breakpoints(d, kind, c, ua, ub)) {
    if (u - cuts.back() > 4.0 * nudge(u)) cuts.push_back(u);
  }
  if (ub - cuts.back() > 4.0 * nudge(ub)) {
    cuts.push_back(ub);
  } else {
    cuts.back() = ub;
  }

  CompensatedSum integral;
  std::size_t k = 1;  // next uniform node strictly inside the current piece
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double left = cuts[p];
    const double right = cuts[p + 1];
    double prev_u = left;
    double prev_f = f(left + nudge(left));
    for (; k + 1 < nodes; ++k) {
      const double u = ua + h * static_cast<double>(k);
      if (u >= right - 2.0 * nudge(right)) break;
      if (u <= left + 2.0 * nudge(left)) continue;
      const double fu = f(u);
      integral += 0.5 * (u - prev_u) * (prev_f + fu);
      prev_u = u;
      prev_f = fu;
    }
    integral += 0.5 * (right - prev_u) * (prev_f + f(right - nudge(right)));
  }

  const double span = measure == PrevalenceMeasure::LogitUniform ? ub - ua : iv.b - iv.a;
  return integral.value() / span;
}

}  // namespace schervish
