#pragma once

// Subjective-logic addition, multiplication and division of binomial
// opinions (Josang, "Subjective Logic", 2016).

#include "aprob/opinion.hpp"

namespace aprob {

/// Opinion about the union of two disjoint propositions.
inline Opinion sl_sum(const Opinion& x, const Opinion& y) {
  const double ax = x.base_rate(), ay = y.base_rate();
  const double as = ax + ay;
  if (as <= 0.0) throw UndefinedResult("sl_sum: both base rates are zero");
  const double b = x.belief() + y.belief();
  const double d = (ax * (x.disbelief() - y.belief()) + ay * (y.disbelief() - x.belief())) / as;
  const double u = (ax * x.uncertainty() + ay * y.uncertainty()) / as;
  return Opinion::checked(b, d, u, as);
}

/// Opinion about the conjunction of two independent propositions.
inline Opinion sl_product(const Opinion& x, const Opinion& y) {
  const double ax = x.base_rate(), ay = y.base_rate();
  const double k = 1.0 - ax * ay;
  if (k <= kDivisionEpsilon) throw UndefinedResult("sl_product: both base rates are one");
  const double bx = x.belief(), by = y.belief();
  const double dx = x.disbelief(), dy = y.disbelief();
  const double ux = x.uncertainty(), uy = y.uncertainty();
  const double b = bx * by + ((1.0 - ax) * ay * bx * uy + ax * (1.0 - ay) * ux * by) / k;
  const double d = dx + dy - dx * dy;
  const double u = ux * uy + ((1.0 - ay) * bx * uy + (1.0 - ax) * ux * by) / k;
  return Opinion::checked(b, d, u, ax * ay);
}

/// Whether sl_division(x, y) is defined: a_x < a_y, d_x >= d_y and the two
/// lower bounds on b_x and u_x.
inline bool sl_division_defined(const Opinion& x, const Opinion& y) {
  const double ax = x.base_rate(), ay = y.base_rate();
  const double bx = x.belief(), by = y.belief();
  const double dx = x.disbelief(), dy = y.disbelief();
  const double ux = x.uncertainty(), uy = y.uncertainty();
  if (!(ax < ay)) return false;
  if (dx < dy - kClampTolerance) return false;
  if (1.0 - dy <= kDivisionEpsilon || 1.0 - ax <= kDivisionEpsilon) return false;
  if (by + ay * uy <= kDivisionEpsilon) return false;
  const double min_belief = ax * (1.0 - ay) * (1.0 - dx) * by / ((1.0 - ax) * ay * (1.0 - dy));
  const double min_uncertainty = (1.0 - ay) * (1.0 - dx) * uy / ((1.0 - ax) * (1.0 - dy));
  return bx >= min_belief - kClampTolerance && ux >= min_uncertainty - kClampTolerance;
}

/// Division of x by y, the inverse of sl_product. Throws UndefinedResult
/// when the applicability constraints fail or the result leaves the simplex.
inline Opinion sl_division(const Opinion& x, const Opinion& y) {
  if (!sl_division_defined(x, y)) throw UndefinedResult("sl_division: operands violate constraints");
  const double ax = x.base_rate(), ay = y.base_rate();
  const double bx = x.belief(), by = y.belief();
  const double dx = x.disbelief(), dy = y.disbelief();
  const double ux = x.uncertainty(), uy = y.uncertainty();
  const double gap = ay - ax;
  const double projected_ratio = ay * (bx + ax * ux) / (gap * (by + ay * uy));
  const double b = projected_ratio - ax * (1.0 - dx) / (gap * (1.0 - dy));
  const double d = (dx - dy) / (1.0 - dy);
  const double u = ay * (1.0 - dx) / (gap * (1.0 - dy)) - projected_ratio;
  return Opinion::checked(b, d, u, ax / ay);
}

}  // namespace aprob
