#include "schervish/ranking.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

#include "schervish/set_metrics.hpp"
#include "schervish/summation.hpp"

namespace schervish {

RocResult auc_roc(const Dataset& d) {
  const auto scores = d.scores();
  const auto labels = d.labels();
  const auto weights = d.weights();

  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return scores[i] < scores[j]; });

  RocResult out;
  CompensatedSum wins, ties;
  double neg_below = 0.0;
  double pos_total = 0.0;
  for (std::size_t start = 0; start < order.size();) {
    std::size_t end = start;
    CompensatedSum pos, neg;
    while (end < order.size() && scores[order[end]] == scores[order[start]]) {
      const std::size_t i = order[end];
      if (labels[i] == 1) {
        pos += weights[i];
        ++out.n_pos;
      } else {
        neg += weights[i];
        ++out.n_neg;
      }
      ++end;
    }
    wins += pos.value() * neg_below;
    ties += pos.value() * neg.value();
    neg_below += neg.value();
    pos_total += pos.value();
    start = end;
  }
  if (out.n_pos == 0 || out.n_neg == 0) {
    throw DataError("AUC needs both classes");
  }
  const double pairs = pos_total * neg_below;
  out.auc = (wins.value() + 0.5 * ties.value()) / pairs;
  out.tie_mass = ties.value() / pairs;
  return out;
}

double auc_shift_average(const Dataset& d) {
  const Dataset half = reweight(d, Prevalence(0.5));
  std::map<double, CompensatedSum> mass;
  CompensatedSum total;
  for (std::size_t i = 0; i < half.size(); ++i) {
    mass[half.balanced_scores()[i]] += half.weights()[i];
    total += half.weights()[i];
  }
  CompensatedSum acc;
  for (const auto& [t, m] : mass) {
    acc += m.value() * pama(d, Prevalence::from_complement(t), 0.5);
  }
  return acc.value() / total.value();
}

}  // namespace schervish
