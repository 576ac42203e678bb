#pragma once

#include <cstddef>

#include "schervish/dataset.hpp"

namespace schervish {

struct RocResult {
  double auc = 0.5;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  double tie_mass = 0.0;  // weight fraction of (neg, pos) pairs with equal scores
};

/// Weighted Mann-Whitney statistic: pairs score 1 when the positive ranks
/// strictly higher and 1/2 on an exact tie. O(n log n).
RocResult auc_roc(const Dataset& d);

/// Average balanced accuracy under label shift:
///   sum over distinct balanced scores t of  P_{D_1/2}(s_1/2 = t) * pama(d, 1 - t, 1/2).
/// Equals auc_roc(d) when the scores are calibrated on d.
double auc_shift_average(const Dataset& d);

}  // namespace schervish
