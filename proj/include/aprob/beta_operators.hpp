#pragma once

// Sum, product and conditioning-division of independent Beta-distributed
// random variables. Each operator computes the exact (or first-order) mean
// and variance of the result and moment-matches a Beta distribution to it.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "aprob/opinion.hpp"

namespace aprob {

/// Counters for inputs that were silently repaired.
struct OperatorWarnings {
  std::size_t clamped_sums = 0;
};

/// Moments of X + Y for independent X, Y.
inline MeanVariance beta_sum_moments(const MeanVariance& x, const MeanVariance& y) {
  return {x.mean + y.mean, x.variance + y.variance};
}

/// Moments of XY for independent X, Y.
inline MeanVariance beta_product_moments(const MeanVariance& x, const MeanVariance& y) {
  return {x.mean * y.mean,
          x.variance * y.mean * y.mean + y.variance * x.mean * x.mean + x.variance * y.variance};
}

inline Opinion beta_sum(const Opinion& x, const Opinion& y, const PriorConfig& prior = {},
                        OperatorWarnings* warnings = nullptr) {
  auto m = beta_sum_moments(mean_variance(x, prior.prior_weight), mean_variance(y, prior.prior_weight));
  if (m.mean > 1.0) {
    if (m.mean > 1.0 + kClampTolerance && warnings) ++warnings->clamped_sums;
    m.mean = 1.0;
  }
  return moment_match(m, prior);
}

inline Opinion beta_product(const Opinion& x, const Opinion& y, const PriorConfig& prior = {}) {
  return moment_match(beta_product_moments(mean_variance(x, prior.prior_weight), mean_variance(y, prior.prior_weight)),
                      prior);
}

/// Variance formula used by the conditioning-division.
enum class DivisionVariance {
  /// mu_z^2 (1 - mu_z)^2 [s_x/mu_x^2 + (s_y - s_x)/(mu_y - mu_x)^2 + 2 s_x/(mu_x (mu_y - mu_x))]
  paper,
  /// First-order delta method for X / (X + V): drops the last term above.
  delta_method,
};

inline DivisionVariance parse_division_variance(std::string_view text) {
  if (text == "paper") return DivisionVariance::paper;
  if (text == "delta") return DivisionVariance::delta_method;
  throw std::invalid_argument("unknown division variance '" + std::string(text) + "' (expected paper or delta)");
}

/// Mean and first-order variance of X / Y where Y = X + V with V
/// independent of X.
inline MeanVariance beta_division_moments(const MeanVariance& x, const MeanVariance& y,
                                          DivisionVariance formula = DivisionVariance::paper) {
  if (y.mean <= kDivisionEpsilon) throw UndefinedResult("beta_division: evidence mass vanishes");
  const double mean = std::min(x.mean / y.mean, 1.0);
  const double rest = y.mean - x.mean;
  if (x.mean <= kDivisionEpsilon || rest <= kDivisionEpsilon) return {std::max(mean, 0.0), 0.0};
  double spread = x.variance / (x.mean * x.mean) + (y.variance - x.variance) / (rest * rest);
  if (formula == DivisionVariance::paper) spread += 2.0 * x.variance / (x.mean * rest);
  const double scale = mean * mean * (1.0 - mean) * (1.0 - mean);
  return {mean, std::max(scale * spread, 0.0)};
}

inline Opinion beta_division(const Opinion& x, const Opinion& y, const PriorConfig& prior = {},
                             DivisionVariance formula = DivisionVariance::paper) {
  return moment_match(beta_division_moments(mean_variance(x, prior.prior_weight),
                                            mean_variance(y, prior.prior_weight), formula),
                      prior);
}

/// Upper bound on the relative variance discrepancy between X(Y+Z) and
/// XY+XZ.
inline double distributivity_error_bound(const Opinion& x, const Opinion& y, const Opinion& z,
                                         double prior_weight = 2.0) {
  const auto mx = mean_variance(x, prior_weight);
  const auto my = mean_variance(y, prior_weight);
  const auto mz = mean_variance(z, prior_weight);
  const double numerator = 2.0 * my.mean * mz.mean * mx.variance;
  const double denominator = mx.variance * (my.mean * my.mean + mz.mean * mz.mean) +
                             (mx.mean * mx.mean + mx.variance) * (my.variance + mz.variance);
  if (denominator <= 0.0) return 0.0;
  return numerator / denominator;
}

}  // namespace aprob
