#include "schervish/decompose.hpp"

#include <algorithm>
#include <cmath>

#include "schervish/calibration.hpp"
#include "schervish/set_metrics.hpp"

namespace schervish {

namespace {

void check_additive(double expected, double assembled, const char* what) {
  if (!(std::abs(expected - assembled) <= kAdditivityTolerance)) {
    throw std::logic_error(std::string(what) + " terms do not add up");
  }
}

}  // namespace

DecompositionReport decompose_sharpness_calibration(const Dataset& a, const Dataset& b, const PrevalenceInterval& iv,
                                                    double c) {
  iv.validate();
  const Dataset a_star = recalibrate(a, pava_fit(a));
  const Dataset b_star = recalibrate(b, pava_fit(b));
  const double va = dca_log(a, iv, c).value;
  const double vb = dca_log(b, iv, c).value;
  const double va_star = dca_log(a_star, iv, c).value;
  const double vb_star = dca_log(b_star, iv, c).value;

  DecompositionReport r;
  r.kind = "sharpness-calibration";
  r.total_name = "total";
  r.interval = iv;
  r.c = c;
  r.delta_total = va - vb;
  r.first = {"sharpness", va_star - vb_star};
  r.second = {"calibration", r.delta_total - r.first.value};
  r.second_assembled = (va - va_star) + (vb_star - vb);
  check_additive(r.second.value, r.second_assembled, "calibration");
  return r;
}

PrevalenceInterval prevalence_span(const Dataset& a, const Dataset& b) {
  const double pa = a.prevalence();
  const double pb = b.prevalence();
  if (pa == pb) {
    throw NotApplicable("groups have equal prevalence; the mechanism/label-shift split is undefined");
  }
  return {std::min(pa, pb), std::max(pa, pb)};
}

DecompositionReport decompose_mechanism_labelshift(const Dataset& a, const Dataset& b, double c) {
  const PrevalenceInterval iv = prevalence_span(a, b);
  const double ea = dca_log(a, iv, c).value;
  const double eb = dca_log(b, iv, c).value;
  const double ka = pamnb(a, Prevalence(a.prevalence()), c);
  const double kb = pamnb(b, Prevalence(b.prevalence()), c);

  DecompositionReport r;
  r.kind = "mechanism-labelshift";
  r.total_name = "kappa";
  r.interval = iv;
  r.c = c;
  r.delta_total = ka - kb;
  r.first = {"mechanism", ea - eb};
  r.second = {"label_shift", r.delta_total - r.first.value};
  r.second_assembled = (ka - ea) + (eb - kb);
  check_additive(r.second.value, r.second_assembled, "label-shift");
  return r;
}

DecompositionIntervals decomposition_intervals(const Dataset& a, const Dataset& b, const PrevalenceInterval& iv,
                                               double c, const BootstrapSpec& spec) {
  std::optional<PrevalenceInterval> span;
  try {
    span = prevalence_span(a, b);
  } catch (const NotApplicable&) {
  }

  // Columns per group: dca_log on iv, dca_log after recalibration, PAMNB at
  // the group's own prevalence, then dca_log on the prevalence span.
  std::vector<Stratum> strata;
  std::vector<std::vector<double>> scale;
  for (const Dataset* g : {&a, &b}) {
    Stratum s;
    std::vector<double> k;
    for (const ScoreReport& r : {dca_log(*g, iv, c), dca_log(recalibrate(*g, pava_fit(*g)), iv, c)}) {
      s.columns.push_back(r.per_sample);
      k.push_back(r.gamma * r.normalizer);
    }
    s.columns.push_back(contributions(*g, MetricRequest{MetricKind::PAMNB, 0.5, c, g->prevalence()}));
    k.push_back(1.0);
    if (span) {
      const ScoreReport r = dca_log(*g, *span, c);
      s.columns.push_back(r.per_sample);
      k.push_back(r.gamma * r.normalizer);
    }
    strata.push_back(std::move(s));
    scale.push_back(std::move(k));
  }
  auto diff = [&](std::size_t col) { return Contrast{Term{0, col, scale[0][col]}, Term{1, col, -scale[1][col]}}; };
  auto minus = [](Contrast x, const Contrast& y) {
    for (Term t : y) {
      t.coef = -t.coef;
      x.push_back(t);
    }
    return x;
  };
  std::vector<Contrast> contrasts{diff(0), diff(1), minus(diff(0), diff(1))};
  if (span) {
    contrasts.push_back(diff(2));
    contrasts.push_back(diff(3));
    contrasts.push_back(minus(diff(2), diff(3)));
  }
  const std::vector<ConfidenceInterval> cis = bootstrap_contrasts(strata, contrasts, spec);

  DecompositionIntervals out;
  out.total = cis[0];
  out.sharpness = cis[1];
  out.calibration = cis[2];
  if (span) {
    out.kappa = cis[3];
    out.mechanism = cis[4];
    out.label_shift = cis[5];
  }
  return out;
}

}  // namespace schervish
