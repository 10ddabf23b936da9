#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "aprob/opinion.hpp"

namespace aprob {

namespace detail {

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
inline double incomplete_beta_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  const int max_iter = 200 + static_cast<int>(20.0 * std::sqrt(std::max(a, b)));
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) <= eps) break;
  }
  return h;
}

}  // namespace detail

/// Regularized incomplete beta function I_x(a, b) for a, b > 0.
inline double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("incomplete beta needs a, b > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::incomplete_beta_fraction(a, b, x) / a;
  return 1.0 - front * detail::incomplete_beta_fraction(b, a, 1.0 - x) / b;
}

inline double beta_cdf(const BetaParams& beta, double x) {
  return regularized_incomplete_beta(beta.alpha_pos, beta.alpha_neg, x);
}

/// Inverse CDF of a Beta distribution. Safeguarded Newton iteration inside
/// a bisection bracket on the monotone CDF.
inline double beta_quantile(const BetaParams& beta, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("beta_quantile: p outside [0,1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  const double a = beta.alpha_pos, b = beta.alpha_neg;
  const double log_norm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);

  double lo = 0.0, hi = 1.0;
  double x = std::clamp(beta.mean(), 1e-300, 1.0 - 1e-16);
  for (int iter = 0; iter < 400; ++iter) {
    const double err = regularized_incomplete_beta(a, b, x) - p;
    if (std::abs(err) <= 1e-13) return x;
    if (err < 0.0) lo = x;
    else hi = x;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(hi, 1e-300)) break;

    const double log_pdf = log_norm + (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x);
    double next = x - err / std::exp(log_pdf);
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    x = next;
  }
  return x;
}

}  // namespace aprob
