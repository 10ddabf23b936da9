#pragma once

// aProbLog parametrisations: a label carrier with plus, times, divide,
// neutral elements and the labeling of negated facts.

#include <concepts>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "aprob/beta_operators.hpp"
#include "aprob/opinion.hpp"
#include "aprob/sl_operators.hpp"

namespace aprob {

/// A fact label as written in a program: an exact probability or an opinion.
using Label = std::variant<double, Opinion>;

template <class S>
concept Parametrisation = requires(const S& s, const typename S::value_type& x, const Label& l) {
  typename S::value_type;
  { s.plus(x, x) } -> std::same_as<typename S::value_type>;
  { s.times(x, x) } -> std::same_as<typename S::value_type>;
  { s.divide(x, x) } -> std::same_as<typename S::value_type>;
  { s.zero() } -> std::same_as<typename S::value_type>;
  { s.one() } -> std::same_as<typename S::value_type>;
  { s.negate_label(x) } -> std::same_as<typename S::value_type>;
  { s.from_label(l) } -> std::same_as<typename S::value_type>;
  { S::conditions_via_complement } -> std::convertible_to<bool>;
};

/// Probabilities under ordinary arithmetic (ProbLog).
struct ProbSemiring {
  using value_type = double;
  static constexpr bool conditions_via_complement = false;

  double plus(double a, double b) const { return a + b; }
  double times(double a, double b) const { return a * b; }
  double divide(double a, double b) const {
    if (b <= 0.0) throw UndefinedResult("evidence has probability zero");
    return a / b;
  }
  double zero() const { return 0.0; }
  double one() const { return 1.0; }
  double negate_label(double p) const { return 1.0 - p; }
  double from_label(const Label& label) const {
    if (const auto* op = std::get_if<Opinion>(&label)) return projected_probability(*op);
    return std::get<double>(label);
  }
};

/// Subjective-logic operators. Undefined divisions fall back to the vacuous
/// opinion <0, 0, 1, 0.5>.
struct SlSemiring {
  using value_type = Opinion;
  static constexpr bool conditions_via_complement = false;

  Opinion plus(const Opinion& a, const Opinion& b) const { return sl_sum(a, b); }
  Opinion times(const Opinion& a, const Opinion& b) const { return sl_product(a, b); }
  Opinion divide(const Opinion& a, const Opinion& b) const {
    try {
      return sl_division(a, b);
    } catch (const UndefinedResult&) {
      return Opinion::vacuous(0.5);
    }
  }
  Opinion zero() const { return {0.0, 1.0, 0.0, 0.0}; }
  Opinion one() const { return {1.0, 0.0, 0.0, 1.0}; }
  Opinion negate_label(const Opinion& a) const { return complement(a); }
  Opinion from_label(const Label& label) const {
    if (const auto* p = std::get_if<double>(&label)) return Opinion::point_mass(*p);
    return std::get<Opinion>(label);
  }
};

/// Moment-matched Beta operators. The neutral elements are the point masses
/// at 0 (for plus) and at 1 (for times).
struct BetaSemiring {
  using value_type = Opinion;
  static constexpr bool conditions_via_complement = true;

  PriorConfig prior{};
  OperatorWarnings* warnings = nullptr;
  DivisionVariance division = DivisionVariance::paper;

  Opinion plus(const Opinion& a, const Opinion& b) const { return beta_sum(a, b, prior, warnings); }
  Opinion times(const Opinion& a, const Opinion& b) const { return beta_product(a, b, prior); }
  Opinion divide(const Opinion& a, const Opinion& b) const { return beta_division(a, b, prior, division); }
  Opinion zero() const { return Opinion::point_mass(0.0, prior.base_rate); }
  Opinion one() const { return Opinion::point_mass(1.0, prior.base_rate); }
  Opinion negate_label(const Opinion& a) const { return complement(a); }
  Opinion from_label(const Label& label) const {
    if (const auto* p = std::get_if<double>(&label)) return Opinion::point_mass(*p, prior.base_rate);
    return std::get<Opinion>(label);
  }
};

inline ProbSemiring prob_parametrisation() { return {}; }
inline SlSemiring sl_parametrisation() { return {}; }
inline BetaSemiring beta_parametrisation(const PriorConfig& prior = {}) { return {prior, nullptr, DivisionVariance::paper}; }

enum class FoldOp { plus, times };

/// Left fold in the given (canonical) order. An empty sequence folds to the
/// neutral element of the operation.
template <Parametrisation S>
typename S::value_type fold_labels(std::span<const typename S::value_type> labels, FoldOp op,
                                   const S& semiring) {
  if (labels.empty()) return op == FoldOp::plus ? semiring.zero() : semiring.one();
  typename S::value_type acc = labels.front();
  for (const auto& label : labels.subspan(1))
    acc = op == FoldOp::plus ? semiring.plus(acc, label) : semiring.times(acc, label);
  return acc;
}

enum class SemiringKind { prob, sl, beta };

inline std::string_view to_string(SemiringKind kind) {
  switch (kind) {
    case SemiringKind::prob: return "prob";
    case SemiringKind::sl: return "sl";
    case SemiringKind::beta: return "beta";
  }
  return "?";
}

inline SemiringKind parse_semiring_kind(std::string_view text) {
  if (text == "prob") return SemiringKind::prob;
  if (text == "sl") return SemiringKind::sl;
  if (text == "beta") return SemiringKind::beta;
  throw std::invalid_argument("unknown semiring '" + std::string(text) + "' (expected prob, sl or beta)");
}

/// Calls `fn` with the concrete parametrisation selected by `kind`.
template <class Fn>
decltype(auto) visit_semiring(SemiringKind kind, const PriorConfig& prior, Fn&& fn,
                              DivisionVariance division = DivisionVariance::paper) {
  switch (kind) {
    case SemiringKind::prob: return fn(ProbSemiring{});
    case SemiringKind::sl: return fn(SlSemiring{});
    case SemiringKind::beta: break;
  }
  return fn(BetaSemiring{prior, nullptr, division});
}

}  // namespace aprob
