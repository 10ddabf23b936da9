#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <ostream>
#include <stdexcept>
#include <string>

namespace aprob {

/// Dirichlet strength used to represent point masses (u = 0, variance 0).
inline constexpr double kMaxStrength = 1e12;
/// Guard applied to every denominator in the Beta and SL operators.
inline constexpr double kDivisionEpsilon = 1e-12;
/// Component violations up to this size are clamped instead of rejected.
inline constexpr double kClampTolerance = 1e-9;

/// Raised when an operator has no defined result for its operands.
class UndefinedResult : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct PriorConfig {
  double base_rate = 0.5;
  double prior_weight = 2.0;

  void validate() const {
    if (!(prior_weight > 0.0)) throw std::invalid_argument("prior weight must be positive");
    if (!(base_rate > 0.0 && base_rate < 1.0))
      throw std::invalid_argument("prior base rate must lie in (0,1)");
  }
};

struct ObservationCounts {
  std::uint64_t n_pos = 0;
  std::uint64_t n_neg = 0;

  std::uint64_t total() const { return n_pos + n_neg; }
};

/// Subjective opinion <belief, disbelief, uncertainty, base rate> about a
/// binary proposition. Components are clamped and renormalized on
/// construction so that b + d + u == 1.
class Opinion {
 public:
  Opinion() : b_(0.0), d_(0.0), u_(1.0), a_(0.5) {}

  Opinion(double belief, double disbelief, double uncertainty, double base_rate)
      : b_(belief), d_(disbelief), u_(uncertainty), a_(base_rate) {
    normalize(1e-6);
  }

  static Opinion vacuous(double base_rate = 0.5) { return {0.0, 0.0, 1.0, base_rate}; }

  /// Dogmatic opinion (u = 0) whose projected probability is exactly p.
  static Opinion point_mass(double p, double base_rate = 0.5) {
    p = std::clamp(p, 0.0, 1.0);
    return {p, 1.0 - p, 0.0, base_rate};
  }

  /// Builds an opinion from operator output, where only rounding-level
  /// violations of the simplex are tolerated.
  static Opinion checked(double belief, double disbelief, double uncertainty, double base_rate) {
    Opinion op;
    op.b_ = belief;
    op.d_ = disbelief;
    op.u_ = uncertainty;
    op.a_ = base_rate;
    op.normalize(kClampTolerance, /*undefined_on_failure=*/true);
    return op;
  }

  double belief() const { return b_; }
  double disbelief() const { return d_; }
  double uncertainty() const { return u_; }
  double base_rate() const { return a_; }

  bool is_point_mass() const { return u_ == 0.0; }

  friend bool operator==(const Opinion&, const Opinion&) = default;

 private:
  void normalize(double tolerance, bool undefined_on_failure = false) {
    auto fail = [&](const std::string& what) {
      if (undefined_on_failure) throw UndefinedResult(what);
      throw std::invalid_argument(what);
    };
    for (double* c : {&b_, &d_, &u_, &a_}) {
      if (!std::isfinite(*c)) fail("opinion component is not finite");
      if (*c < -tolerance || *c > 1.0 + tolerance) fail("opinion component outside [0,1]");
      *c = std::clamp(*c, 0.0, 1.0);
    }
    double sum = b_ + d_ + u_;
    if (std::abs(sum - 1.0) > std::max(tolerance, 1e-9) * 3.0) fail("opinion components do not sum to 1");
    if (sum != 1.0) {
      b_ /= sum;
      d_ /= sum;
      u_ /= sum;
    }
  }

  double b_, d_, u_, a_;
};

inline std::ostream& operator<<(std::ostream& os, const Opinion& op) {
  return os << '<' << op.belief() << ',' << op.disbelief() << ',' << op.uncertainty() << ','
            << op.base_rate() << '>';
}

/// Beta distribution parameters <alpha_x, alpha_xbar>.
struct BetaParams {
  double alpha_pos = 1.0;
  double alpha_neg = 1.0;

  double strength() const { return alpha_pos + alpha_neg; }
  double mean() const { return alpha_pos / strength(); }
  double variance() const {
    const double m = mean();
    return m * (1.0 - m) / (strength() + 1.0);
  }
};

struct MeanVariance {
  double mean = 0.0;
  double variance = 0.0;
};

inline double projected_probability(const Opinion& op) {
  return op.belief() + op.uncertainty() * op.base_rate();
}

/// Dirichlet strength W/u of an opinion, capped at kMaxStrength.
inline double dirichlet_strength(const Opinion& op, double prior_weight = 2.0) {
  if (op.uncertainty() <= prior_weight / kMaxStrength) return kMaxStrength;
  return prior_weight / op.uncertainty();
}

inline Opinion beta_to_opinion(const BetaParams& beta, double base_rate = 0.5,
                               double prior_weight = 2.0) {
  const double s = beta.strength();
  if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("Beta strength must be positive");
  const double b = (beta.alpha_pos - prior_weight * base_rate) / s;
  const double d = (beta.alpha_neg - prior_weight * (1.0 - base_rate)) / s;
  const double u = prior_weight / s;
  if (b < -kClampTolerance || d < -kClampTolerance)
    throw std::invalid_argument("Beta parameters below the prior mass cannot be mapped to an opinion");
  return Opinion::checked(b, d, u, base_rate);
}

/// Inverse of beta_to_opinion. Point masses (u == 0) map to strength
/// kMaxStrength + W so the alpha floor still holds.
inline BetaParams opinion_to_beta(const Opinion& op, double prior_weight = 2.0) {
  const double evidence = op.is_point_mass() ? kMaxStrength : prior_weight / op.uncertainty();
  return {evidence * op.belief() + prior_weight * op.base_rate(),
          evidence * op.disbelief() + prior_weight * (1.0 - op.base_rate())};
}

inline Opinion opinion_from_counts(const ObservationCounts& counts, const PriorConfig& prior = {}) {
  const BetaParams beta{static_cast<double>(counts.n_pos) + prior.prior_weight * prior.base_rate,
                        static_cast<double>(counts.n_neg) +
                            prior.prior_weight * (1.0 - prior.base_rate)};
  return beta_to_opinion(beta, prior.base_rate, prior.prior_weight);
}

inline MeanVariance mean_variance(const Opinion& op, double prior_weight = 2.0) {
  const double mu = projected_probability(op);
  if (op.is_point_mass()) return {mu, 0.0};
  const double s = dirichlet_strength(op, prior_weight);
  return {mu, mu * (1.0 - mu) / (s + 1.0)};
}

/// Fits a Beta distribution to (mean, variance) by the method of moments,
/// with the strength floor max{W a / mu, W (1 - a) / (1 - mu)} that keeps
/// both alpha components at or above the prior mass.
inline Opinion moment_match(double mean, double variance, const PriorConfig& prior = {}) {
  if (!std::isfinite(mean) || mean < -kClampTolerance || mean > 1.0 + kClampTolerance)
    throw std::invalid_argument("moment_match: mean outside [0,1]");
  if (!(variance >= 0.0) && !(variance < 0.0))
    throw std::invalid_argument("moment_match: variance is NaN");
  mean = std::clamp(mean, 0.0, 1.0);
  const double a = prior.base_rate;
  const double w = prior.prior_weight;
  if (mean <= 0.0 || mean >= 1.0 || variance <= 0.0) return Opinion::point_mass(mean, a);

  const double moments = mean * (1.0 - mean) / variance - 1.0;
  const double s = std::max({moments, w * a / mean, w * (1.0 - a) / (1.0 - mean)});
  if (s >= kMaxStrength) return Opinion::point_mass(mean, a);

  // Computed directly rather than through BetaParams so the projected
  // probability reproduces `mean` without an extra rounding step.
  const double b = mean - w * a / s;
  const double d = (1.0 - mean) - w * (1.0 - a) / s;
  return Opinion::checked(b, d, w / s, a);
}

inline Opinion moment_match(const MeanVariance& mv, const PriorConfig& prior = {}) {
  return moment_match(mv.mean, mv.variance, prior);
}

/// Label of the negated proposition: <d, b, u, 1 - a>.
inline Opinion complement(const Opinion& op) {
  return Opinion::checked(op.disbelief(), op.belief(), op.uncertainty(), 1.0 - op.base_rate());
}

}  // namespace aprob
