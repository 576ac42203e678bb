#include "schervish/odds.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace schervish {

namespace {

void require_closed(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error(std::string(what) + " must lie in [0,1], got " + std::to_string(p));
  }
}

void require_open(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error(std::string(what) + " must lie in (0,1), got " + std::to_string(p));
  }
}

// ab / (ab + a'b') with the complements supplied by the caller.
double odds_product(double a, double a_c, double b, double b_c) {
  const double num = a * b;
  const double den = num + a_c * b_c;
  if (den == 0.0) {
    throw std::domain_error("odds multiplication of 0 and 1 is undefined");
  }
  return num / den;
}

}  // namespace

Prevalence::Prevalence(double p) : value_(p), complement_(1.0 - p) {
  require_closed(p, "prevalence");
}

Prevalence Prevalence::from_complement(double q) {
  require_closed(q, "prevalence complement");
  return Prevalence(1.0 - q, q);
}

double odds_mul(double a, double b) {
  require_open(a, "left odds operand");
  require_closed(b, "right odds operand");
  if (a == 0.5) return b;
  if (b == 0.5) return a;
  return odds_product(a, 1.0 - a, b, 1.0 - b);
}

Prevalence odds_mul(const Prevalence& a, const Prevalence& b) {
  if (a.value() == 0.5) return b;
  if (b.value() == 0.5) return a;
  const double pos = a.value() * b.value();
  const double neg = a.complement() * b.complement();
  const double den = pos + neg;
  if (den == 0.0) {
    throw std::domain_error("odds multiplication of 0 and 1 is undefined");
  }
  const double p = pos / den;
  const double q = neg / den;
  return p <= 0.5 ? Prevalence(p) : Prevalence::from_complement(q);
}

double logit(double p) {
  require_open(p, "logit argument");
  return std::log(p) - std::log1p(-p);
}

double logit(const Prevalence& p) {
  if (!p.interior()) {
    throw std::domain_error("logit argument must lie in (0,1)");
  }
  return std::log(p.value()) - std::log(p.complement());
}

double sigmoid(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double clip(double lo, double hi, double x) {
  if (lo > hi) {
    throw std::invalid_argument("clip bounds out of order");
  }
  return std::max(lo, std::min(hi, x));
}

double importance_weight(double pi0, const Prevalence& pi, int y) {
  require_open(pi0, "source prevalence");
  return y == 1 ? pi.value() / pi0 : pi.complement() / (1.0 - pi0);
}

double balanced_score(double s, double pi0) {
  require_open(pi0, "source prevalence");
  require_closed(s, "score");
  if (pi0 == 0.5) return s;
  return odds_product(1.0 - pi0, pi0, s, 1.0 - s);
}

double adjusted_score(double s, double pi0, const Prevalence& pi) {
  const double half = balanced_score(s, pi0);
  if (pi.value() == 0.5) return half;
  if (half == 0.5) return pi.value();
  return odds_product(pi.value(), pi.complement(), half, 1.0 - half);
}

double balanced_threshold(const Prevalence& pi, double threshold) {
  require_open(threshold, "threshold");
  if (threshold == 0.5) return pi.complement();
  if (pi.value() == 0.5) return threshold;
  return odds_product(pi.complement(), pi.value(), threshold, 1.0 - threshold);
}

int classify(double s, double pi0, const Prevalence& pi, double c) {
  return balanced_score(s, pi0) >= balanced_threshold(pi, c) ? 1 : 0;
}

}  // namespace schervish
