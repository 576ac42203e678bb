#include "schervish/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <system_error>

#include "schervish/summation.hpp"

namespace schervish {

DataError::DataError(const std::string& message, std::size_t row)
    : std::runtime_error(row == 0 ? message : "row " + std::to_string(row) + ": " + message),
      row_(row) {}

Dataset::Dataset(std::span<const Sample> samples, std::optional<double> pi0) {
  if (samples.empty()) {
    throw DataError("dataset is empty");
  }
  scores_.reserve(samples.size());
  labels_.reserve(samples.size());
  weights_.reserve(samples.size());
  groups_.reserve(samples.size());
  std::size_t row = 0;
  for (const Sample& s : samples) {
    ++row;
    if (!(s.score >= 0.0 && s.score <= 1.0)) {
      throw DataError("score out of range [0,1]", row);
    }
    if (s.label != 0 && s.label != 1) {
      throw DataError("label must be 0 or 1", row);
    }
    if (!(s.weight > 0.0) || !std::isfinite(s.weight)) {
      throw DataError("weight must be positive", row);
    }
    scores_.push_back(s.score);
    labels_.push_back(s.label);
    weights_.push_back(s.weight);
    groups_.push_back(s.group);
  }
  finish_prevalence(pi0);
}

void Dataset::finish_prevalence(std::optional<double> pi0) {
  CompensatedSum total;
  CompensatedSum positive;
  for (std::size_t i = 0; i < size(); ++i) {
    total += weights_[i];
    if (labels_[i] == 1) positive += weights_[i];
  }
  total_weight_ = total.value();
  reference_weight_ = total_weight_;
  const double empirical = positive.value() / total_weight_;
  if (!(empirical > 0.0 && empirical < 1.0)) {
    throw DataError("degenerate prevalence: both labels must be present");
  }
  if (pi0 && !(*pi0 > 0.0 && *pi0 < 1.0)) {
    throw DataError("prevalence override must lie in (0,1)");
  }
  pi0_ = pi0.value_or(empirical);
  balanced_.resize(size());
  for (std::size_t i = 0; i < size(); ++i) {
    balanced_[i] = balanced_score(scores_[i], pi0_);
  }
}

std::span<const double> Dataset::balanced_scores() const { return balanced_; }

bool Dataset::has_groups() const noexcept {
  return std::any_of(groups_.begin(), groups_.end(), [](const std::string& g) { return !g.empty(); });
}

bool Dataset::has_weights() const noexcept {
  return std::any_of(weights_.begin(), weights_.end(), [](double w) { return w != 1.0; });
}

Sample Dataset::sample(std::size_t i) const {
  return Sample{scores_.at(i), labels_.at(i), groups_.at(i), weights_.at(i)};
}

std::vector<Sample> Dataset::samples() const {
  std::vector<Sample> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(sample(i));
  return out;
}

std::vector<std::string> Dataset::group_names() const {
  std::vector<std::string> names;
  for (const std::string& g : groups_) {
    if (std::find(names.begin(), names.end(), g) == names.end()) names.push_back(g);
  }
  return names;
}

Dataset Dataset::subgroup(const std::string& name) const {
  std::vector<Sample> rows;
  for (std::size_t i = 0; i < size(); ++i) {
    if (groups_[i] == name) rows.push_back(sample(i));
  }
  if (rows.empty()) {
    throw DataError("no rows in group '" + name + "'");
  }
  try {
    return Dataset(rows);
  } catch (const DataError& e) {
    throw DataError("group '" + name + "': " + e.what());
  }
}

Dataset Dataset::with_scores(std::vector<double> scores) const {
  if (scores.size() != size()) {
    throw std::invalid_argument("score vector length does not match dataset");
  }
  for (double s : scores) {
    if (!(s >= 0.0 && s <= 1.0)) throw DataError("score out of range [0,1]");
  }
  Dataset out = *this;
  out.scores_ = std::move(scores);
  for (std::size_t i = 0; i < size(); ++i) {
    out.balanced_[i] = balanced_score(out.scores_[i], pi0_);
  }
  return out;
}

double empirical_prevalence(const Dataset& d) {
  CompensatedSum total;
  CompensatedSum positive;
  for (std::size_t i = 0; i < d.size(); ++i) {
    total += d.weights()[i];
    if (d.labels()[i] == 1) positive += d.weights()[i];
  }
  return positive.value() / total.value();
}

Dataset reweight(const Dataset& d, const Prevalence& pi) {
  // The balanced score is a property of x alone under label shift, so it is
  // carried over unchanged rather than recomputed from the new prevalence.
  Dataset out;
  out.scores_ = d.scores_;
  out.labels_ = d.labels_;
  out.groups_ = d.groups_;
  out.balanced_ = d.balanced_;
  out.weights_.resize(d.size());
  CompensatedSum total;
  for (std::size_t i = 0; i < d.size(); ++i) {
    out.weights_[i] = d.weights_[i] * importance_weight(d.pi0_, pi, d.labels_[i]);
    total += out.weights_[i];
  }
  out.pi0_ = pi.value();
  out.total_weight_ = total.value();
  out.reference_weight_ = d.reference_weight_;
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(std::string_view field, const char* column, std::size_t row) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw DataError(std::string("malformed number in column '") + column + "': '" + std::string(field) + "'", row);
  }
  return value;
}

}  // namespace

Dataset load_csv(std::istream& in, std::optional<double> pi0) {
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("missing header row");
  }
  const auto header = split_fields(line);
  int score_col = -1, label_col = -1, group_col = -1, weight_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    int* slot = nullptr;
    if (header[c] == "score") slot = &score_col;
    else if (header[c] == "label") slot = &label_col;
    else if (header[c] == "group") slot = &group_col;
    else if (header[c] == "weight") slot = &weight_col;
    else throw DataError("unknown column '" + std::string(header[c]) + "'");
    if (*slot != -1) throw DataError("duplicate column '" + std::string(header[c]) + "'");
    *slot = static_cast<int>(c);
  }
  if (score_col < 0 || label_col < 0) {
    throw DataError("header must name columns 'score' and 'label'");
  }

  std::vector<Sample> rows;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw DataError("expected " + std::to_string(header.size()) + " fields, found " +
                          std::to_string(fields.size()),
                      row);
    }
    Sample s;
    s.score = parse_number(fields[score_col], "score", row);
    if (!(s.score >= 0.0 && s.score <= 1.0)) {
      throw DataError("score out of range [0,1]", row);
    }
    const double label = parse_number(fields[label_col], "label", row);
    if (label != 0.0 && label != 1.0) {
      throw DataError("label must be 0 or 1", row);
    }
    s.label = static_cast<int>(label);
    if (group_col >= 0) s.group = std::string(fields[group_col]);
    if (weight_col >= 0) {
      s.weight = parse_number(fields[weight_col], "weight", row);
      if (!(s.weight > 0.0)) throw DataError("weight must be positive", row);
    }
    rows.push_back(std::move(s));
  }
  return Dataset(rows, pi0);
}

Dataset load_csv_file(const std::string& path, std::optional<double> pi0) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open '" + path + "'");
  }
  return load_csv(in, pi0);
}

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const Dataset& d) {
  const bool groups = d.has_groups();
  const bool weights = d.has_weights();
  out << "score,label";
  if (groups) out << ",group";
  if (weights) out << ",weight";
  out << '\n';
  for (std::size_t i = 0; i < d.size(); ++i) {
    out << format_double(d.scores()[i]) << ',' << d.labels()[i];
    if (groups) out << ',' << d.groups()[i];
    if (weights) out << ',' << format_double(d.weights()[i]);
    out << '\n';
  }
}

void GeneratorSpec::validate() const {
  if (n < 2) throw std::invalid_argument("generator needs n >= 2");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("generator needs sigma > 0");
  if (!(pi0 > 0.0 && pi0 < 1.0)) throw std::invalid_argument("generator pi0 must lie in (0,1)");
  if (!std::isfinite(mu0) || !std::isfinite(mu1) || !std::isfinite(calib_slope) ||
      !std::isfinite(calib_intercept)) {
    throw std::invalid_argument("generator parameters must be finite");
  }
}

Dataset generate(const GeneratorSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::bernoulli_distribution coin(spec.pi0);
  std::normal_distribution<double> noise(0.0, 1.0);

  const double prior_logit = logit(spec.pi0);
  const double mid = 0.5 * (spec.mu0 + spec.mu1);
  const double slope = (spec.mu1 - spec.mu0) / (spec.sigma * spec.sigma);

  std::vector<Sample> rows(spec.n);
  for (Sample& s : rows) {
    s.label = coin(rng) ? 1 : 0;
    const double x = (s.label == 1 ? spec.mu1 : spec.mu0) + spec.sigma * noise(rng);
    const double posterior_logit = slope * (x - mid) + prior_logit;
    s.score = sigmoid(spec.calib_slope * posterior_logit + spec.calib_intercept);
    s.group = spec.group;
  }
  return Dataset(rows);
}

Dataset concatenate(std::span<const Dataset> parts) {
  std::vector<Sample> rows;
  for (const Dataset& d : parts) {
    for (std::size_t i = 0; i < d.size(); ++i) rows.push_back(d.sample(i));
  }
  return Dataset(rows);
}

}  // namespace schervish
