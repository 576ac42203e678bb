#include "schervish/calibration.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include "schervish/summation.hpp"

namespace schervish {

CalibrationMap::CalibrationMap(std::vector<double> breakpoints, std::vector<double> levels)
    : breakpoints_(std::move(breakpoints)), levels_(std::move(levels)) {
  if (breakpoints_.empty() || breakpoints_.size() != levels_.size()) {
    throw std::invalid_argument("calibration map needs one level per breakpoint");
  }
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (!(levels_[i] >= 0.0 && levels_[i] <= 1.0)) {
      throw std::invalid_argument("calibration level outside [0,1]");
    }
    if (i > 0 && !(breakpoints_[i] > breakpoints_[i - 1])) {
      throw std::invalid_argument("calibration breakpoints must increase");
    }
    if (i > 0 && levels_[i] < levels_[i - 1]) {
      throw std::invalid_argument("calibration levels must not decrease");
    }
  }
}

double CalibrationMap::operator()(double score) const {
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), score);
  if (it == breakpoints_.begin()) return levels_.front();
  return levels_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

void CalibrationMap::write_csv(std::ostream& out) const {
  out << "breakpoint,level\n";
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    out << format_double(breakpoints_[i]) << ',' << format_double(levels_[i]) << '\n';
  }
}

CalibrationMap CalibrationMap::read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "breakpoint,level") throw DataError("calibration map header must be 'breakpoint,level'");
  std::vector<double> bps, levels;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DataError("expected two fields", row);
    try {
      std::size_t used = 0;
      const std::string a = line.substr(0, comma), b = line.substr(comma + 1);
      bps.push_back(std::stod(a, &used));
      if (used != a.size()) throw std::invalid_argument(a);
      levels.push_back(std::stod(b, &used));
      if (used != b.size()) throw std::invalid_argument(b);
    } catch (const std::logic_error&) {
      throw DataError("malformed number", row);
    }
  }
  return CalibrationMap(std::move(bps), std::move(levels));
}

CalibrationMap pava_fit(const Dataset& d) {
  const auto scores = d.scores();
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return scores[i] < scores[j]; });

  struct Block {
    double weight;
    double positive;
    std::size_t first_key;  // index into `keys` of the block's lowest score
    double mean() const { return positive / weight; }
  };
  std::vector<double> keys;
  std::vector<Block> stack;
  for (std::size_t a = 0; a < order.size();) {
    CompensatedSum w, p;
    std::size_t b = a;
    while (b < order.size() && scores[order[b]] == scores[order[a]]) {
      w += d.weights()[order[b]];
      if (d.labels()[order[b]] == 1) p += d.weights()[order[b]];
      ++b;
    }
    keys.push_back(scores[order[a]]);
    Block blk{w.value(), p.value(), keys.size() - 1};
    while (!stack.empty() && stack.back().mean() >= blk.mean()) {
      // Equal means are merged too, so adjacent levels differ.
      blk.weight += stack.back().weight;
      blk.positive += stack.back().positive;
      blk.first_key = stack.back().first_key;
      stack.pop_back();
    }
    stack.push_back(blk);
    a = b;
  }

  std::vector<double> levels(keys.size());
  for (std::size_t k = 0; k < stack.size(); ++k) {
    const std::size_t end = k + 1 < stack.size() ? stack[k + 1].first_key : keys.size();
    const double level = std::clamp(stack[k].mean(), 0.0, 1.0);
    std::fill(levels.begin() + static_cast<std::ptrdiff_t>(stack[k].first_key),
              levels.begin() + static_cast<std::ptrdiff_t>(end), level);
  }
  return CalibrationMap(std::move(keys), std::move(levels));
}

Dataset recalibrate(const Dataset& d, const CalibrationMap& m) {
  std::vector<double> scores(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) scores[i] = m(d.scores()[i]);
  return d.with_scores(std::move(scores));
}

}  // namespace schervish
