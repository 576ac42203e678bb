#pragma once

// Additive explanations of the gap in expected net benefit between two
// subgroups A and B (all deltas are A minus B).

#include <optional>
#include <stdexcept>
#include <string>

#include "schervish/bootstrap.hpp"
#include "schervish/dataset.hpp"
#include "schervish/scores.hpp"

namespace schervish {

/// The mechanism/label-shift split needs two different prevalences.
class NotApplicable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NamedDelta {
  std::string name;
  double value = 0.0;
};

struct DecompositionReport {
  std::string kind;           // "sharpness-calibration" or "mechanism-labelshift"
  std::string total_name;     // "total" or "kappa"
  double delta_total = 0.0;
  NamedDelta first;           // sharpness / mechanism (D->X)
  NamedDelta second;          // calibration / label shift (D->Y)
  double second_assembled = 0.0;  // `second` rebuilt from four bracketed terms
  PrevalenceInterval interval;
  double c = 0.5;
};

/// Tolerance for the additivity checks made on every call.
inline constexpr double kAdditivityTolerance = 1e-10;

/// delta_total = dca_log(A) - dca_log(B); sharpness is the same difference
/// after recalibrating each group on itself with PAVA; calibration is the
/// remainder. Throws std::logic_error if the two ways of computing the
/// calibration term disagree beyond kAdditivityTolerance.
DecompositionReport decompose_sharpness_calibration(const Dataset& a, const Dataset& b, const PrevalenceInterval& iv,
                                                    double c);

/// kappa = pamnb(A at pi0_A) - pamnb(B at pi0_B); mechanism is the dca_log
/// difference over the interval spanned by the two prevalences; label shift
/// is the remainder. Throws NotApplicable when the prevalences are equal.
DecompositionReport decompose_mechanism_labelshift(const Dataset& a, const Dataset& b, double c);

/// Interval between the two groups' prevalences.
PrevalenceInterval prevalence_span(const Dataset& a, const Dataset& b);

/// Bootstrap intervals for every delta of both decompositions.
struct DecompositionIntervals {
  ConfidenceInterval total, sharpness, calibration;
  std::optional<ConfidenceInterval> kappa, mechanism, label_shift;  // empty when not applicable
};

/// Rows are resampled within each group and the per-row loss terms are held
/// fixed (no refit of the recalibration map per replicate). One draw per
/// replicate is shared by all six deltas.
DecompositionIntervals decomposition_intervals(const Dataset& a, const Dataset& b, const PrevalenceInterval& iv,
                                               double c, const BootstrapSpec& spec);

}  // namespace schervish
