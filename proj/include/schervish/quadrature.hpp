#pragma once

// Numerical average of a prior-adjusted set metric over a prevalence
// interval. Used to check the closed-form scoring rules.

#include <cstddef>

#include "schervish/dataset.hpp"
#include "schervish/scores.hpp"

namespace schervish {

enum class AdjustedMetric { PAMA, PAMNB, PAMWA };

enum class PrevalenceMeasure {
  LogitUniform,        // logit(pi) ~ U(logit a, logit b)
  ProbabilityUniform,  // pi ~ U(a, b)
};

/// Composite trapezoid rule on a uniform grid of `nodes` points in logit pi.
///
/// The integrand is a step function of pi times a smooth weight: each row's
/// decision flips where pi crosses a row-specific breakpoint. Those
/// breakpoints are added to the grid (the integrand is evaluated just inside
/// each piece), so the remaining error is the smooth trapezoid error only.
/// Each metric is evaluated at its optimal adjusted threshold (1/2 for PAMA
/// and PAMWA, c for PAMNB). Throws std::invalid_argument unless nodes is odd
/// and at least 3.
double quadrature_expectation(const Dataset& d, AdjustedMetric kind, const PrevalenceInterval& iv, double c,
                              std::size_t nodes = 2049,
                              PrevalenceMeasure measure = PrevalenceMeasure::LogitUniform);

}  // namespace schervish
