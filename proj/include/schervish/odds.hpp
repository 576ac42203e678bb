#pragma once

// Scalar odds algebra: odds multiplication, logit/sigmoid, clipping,
// class-prior importance weights and prior-adjusted decisions.
//
// Probabilities are plain doubles in [0,1]. Functions that need the open
// interval say so and throw std::domain_error on the endpoints.

namespace schervish {

/// Deployment class prevalence, stored together with its complement.
///
/// Keeping both halves lets callers that start from a complement (for
/// instance "prevalence 1 - t" for an observed score t) carry it without
/// the rounding of a second subtraction, so thresholds that should tie
/// exactly still tie.
class Prevalence {
 public:
  /// Throws std::domain_error unless 0 <= p <= 1.
  Prevalence(double p);  // NOLINT(google-explicit-constructor)

  /// Prevalence 1 - q, with complement() == q bit-for-bit.
  static Prevalence from_complement(double q);

  double value() const noexcept { return value_; }
  double complement() const noexcept { return complement_; }

  bool interior() const noexcept { return value_ > 0.0 && complement_ > 0.0; }

 private:
  Prevalence(double p, double q) noexcept : value_(p), complement_(q) {}

  double value_;
  double complement_;
};

/// a ⊗ b = ab / (ab + (1-a)(1-b)); logit(a ⊗ b) = logit(a) + logit(b).
///
/// a must lie in (0,1); b may be 0 or 1, extended by continuity. One half is
/// the identity element and is returned exactly.
double odds_mul(double a, double b);

/// Odds multiplication of two prevalences, keeping both halves.
Prevalence odds_mul(const Prevalence& a, const Prevalence& b);

/// Natural-log odds. Throws std::domain_error outside (0,1).
double logit(double p);

/// ln(value) - ln(complement): exact near 1 where 1 - p would round.
double logit(const Prevalence& p);

double sigmoid(double x) noexcept;

/// max(lo, min(hi, x)). Throws std::invalid_argument if lo > hi.
double clip(double lo, double hi, double x);

/// W(pi0 -> pi; y) = (pi/pi0)^y ((1-pi)/(1-pi0))^(1-y).
double importance_weight(double pi0, const Prevalence& pi, int y);

/// s_1/2 = (1 - pi0) ⊗ s: the score re-expressed for a balanced population.
double balanced_score(double s, double pi0);

/// pi ⊗ (1 - pi0) ⊗ s, the posterior after shifting the prior from pi0 to pi.
/// Throws std::domain_error where the product has the 0/0 form.
double adjusted_score(double s, double pi0, const Prevalence& pi);

/// The balanced-score cut that implements "pi ⊗ s_1/2 >= threshold":
/// (1 - pi) ⊗ threshold. Defined for pi in [0,1], threshold in (0,1).
double balanced_threshold(const Prevalence& pi, double threshold);

/// 1 iff adjusted_score(s, pi0, pi) >= c (ties predict positive).
///
/// Evaluated as s_1/2 >= (1 - pi) ⊗ c, which is the same decision and stays
/// defined when pi or s sits on {0,1}.
int classify(double s, double pi0, const Prevalence& pi, double c);

}  // namespace schervish
