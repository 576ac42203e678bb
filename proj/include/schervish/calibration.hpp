#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "schervish/dataset.hpp"

namespace schervish {

/// Monotone step function from score to calibrated probability.
///
/// breakpoints are the distinct fitted scores in increasing order; a query x
/// takes the level of the largest breakpoint <= x, and queries below the
/// first breakpoint take the first level.
class CalibrationMap {
 public:
  /// Throws std::invalid_argument on empty or mismatched input, breakpoints
  /// not strictly increasing, or levels decreasing or outside [0,1].
  CalibrationMap(std::vector<double> breakpoints, std::vector<double> levels);

  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  const std::vector<double>& levels() const noexcept { return levels_; }

  double operator()(double score) const;

  /// `breakpoint,level` CSV with header.
  void write_csv(std::ostream& out) const;
  static CalibrationMap read_csv(std::istream& in);

 private:
  std::vector<double> breakpoints_;
  std::vector<double> levels_;
};

/// Weighted isotonic regression of label on score by pool-adjacent-violators.
/// Rows with equal scores are pooled first.
CalibrationMap pava_fit(const Dataset& d);

/// Same rows and prevalence with every score replaced by m(score).
Dataset recalibrate(const Dataset& d, const CalibrationMap& m);

}  // namespace schervish
