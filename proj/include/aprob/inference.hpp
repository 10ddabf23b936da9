#pragma once

// Query labels under an arbitrary parametrisation.
//
// Two evaluation strategies are provided:
//  * enumeration: the sum over every complete interpretation of the product
//    of its literal labels, folded in canonical order;
//  * decision_tree: a Shannon expansion that branches, in canonical order,
//    only on facts that can still change the outcome. Facts that cannot are
//    summed out. Subdiagrams with identical residual programs are shared.
// Both agree exactly for the probability semiring. For the order- and
// grouping-sensitive opinion semirings they differ in the variance of the
// result.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "aprob/ground_program.hpp"
#include "aprob/semiring.hpp"

namespace aprob {

enum class Strategy { decision_tree, enumeration };

inline Strategy parse_strategy(std::string_view text) {
  if (text == "tree") return Strategy::decision_tree;
  if (text == "enumerate") return Strategy::enumeration;
  throw std::invalid_argument("unknown strategy '" + std::string(text) + "' (expected tree or enumerate)");
}

struct InferenceOptions {
  Strategy strategy = Strategy::decision_tree;
  std::size_t budget = 24;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void check_budget(const GroundProgram& gp, std::size_t budget) {
  if (gp.num_facts() > budget)
    throw BudgetExceeded("program has " + std::to_string(gp.num_facts()) +
                         " algebraic facts, above the enumeration budget of " + std::to_string(budget) +
                         "; reduce the program or raise the budget");
}

/// A conjunction of ground atoms with required truth values.
struct OutcomeLiteral {
  AtomId atom;
  bool value;
};
using Outcome = std::vector<OutcomeLiteral>;

/// Labels of the positive and negative literal of every fact, indexed by
/// canonical fact number.
template <class V>
struct FactLabels {
  std::vector<V> positive;
  std::vector<V> negative;
};

template <Parametrisation S>
FactLabels<typename S::value_type> make_fact_labels(const S& semiring, std::span<const Label> labels) {
  FactLabels<typename S::value_type> out;
  out.positive.reserve(labels.size());
  out.negative.reserve(labels.size());
  for (const auto& l : labels) {
    out.positive.push_back(semiring.from_label(l));
    out.negative.push_back(semiring.negate_label(out.positive.back()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Enumeration over complete interpretations

/// For each outcome, the plus-fold over interpretations in which it holds of
/// the times-fold of the interpretation's literal labels. Interpretations are
/// visited in lexicographic order with the positive literal first; nullopt
/// marks an outcome that holds in no interpretation.
template <Parametrisation S>
std::vector<std::optional<typename S::value_type>> enumerate_outcomes(
    const ThreeValuedEvaluator& evaluator, std::span<const Outcome> outcomes,
    const FactLabels<typename S::value_type>& labels, const S& semiring) {
  using V = typename S::value_type;
  const GroundProgram& gp = evaluator.program();
  const std::size_t n = gp.num_facts();
  std::vector<std::optional<V>> acc(outcomes.size());
  std::vector<FactValue> assignment(n, 1);
  std::vector<V> prefix;
  prefix.reserve(n + 1);
  ThreeValuedState state;

  auto visit_leaf = [&](const V& weight) {
    evaluator.evaluate(assignment, state);
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
      bool holds = true;
      for (const auto& lit : outcomes[k])
        if (static_cast<bool>(state.definitely_true[lit.atom]) != lit.value) {
          holds = false;
          break;
        }
      if (!holds) continue;
      acc[k] = acc[k] ? semiring.plus(*acc[k], weight) : weight;
    }
  };

  if (n == 0) {
    visit_leaf(semiring.one());
    return acc;
  }
  // Iterative depth-first walk; prefix[i] is the product of literals 0..i.
  std::vector<std::uint8_t> branch(n, 0);
  std::size_t depth = 0;
  for (;;) {
    if (depth < n) {
      assignment[depth] = branch[depth] == 0 ? 1 : 0;
      const V& lit = branch[depth] == 0 ? labels.positive[depth] : labels.negative[depth];
      prefix.resize(depth);
      prefix.push_back(depth == 0 ? lit : semiring.times(prefix[depth - 1], lit));
      ++depth;
      continue;
    }
    visit_leaf(prefix.back());
    // Backtrack to the deepest fact still on its positive branch.
    while (depth > 0 && branch[depth - 1] == 1) {
      branch[depth - 1] = 0;
      --depth;
    }
    if (depth == 0) break;
    branch[depth - 1] = 1;
    --depth;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Decision diagrams

/// Node reference: a non-negative node index or one of the two terminals.
using NodeRef = std::int32_t;
inline constexpr NodeRef kFalseNode = -1;
inline constexpr NodeRef kTrueNode = -2;

struct DecisionNode {
  std::uint32_t fact;
  NodeRef high;  // fact true
  NodeRef low;   // fact false
};

/// Shannon expansion of an outcome. Nodes are stored children-first.
struct DecisionDiagram {
  std::vector<DecisionNode> nodes;
  NodeRef root = kFalseNode;
};

namespace detail {

class DiagramBuilder {
 public:
  DiagramBuilder(const ThreeValuedEvaluator& evaluator, const Outcome& outcome)
      : eval_(evaluator), gp_(evaluator.program()), outcome_(outcome) {
    assignment_.assign(gp_.num_facts(), -1);
    rules_of_.assign(gp_.num_atoms(), {});
    for (std::uint32_t i = 0; i < gp_.rules.size(); ++i) rules_of_[gp_.rules[i].head].push_back(i);
    visited_.assign(gp_.num_atoms(), 0);
  }

  DecisionDiagram build() {
    DecisionDiagram out;
    out.root = expand();
    out.nodes = std::move(nodes_);
    return out;
  }

 private:
  NodeRef expand() {
    std::vector<std::uint32_t> key;
    std::uint32_t branch_fact = 0;
    if (auto terminal = analyse(key, branch_fact)) return *terminal;
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    assignment_[branch_fact] = 1;
    const NodeRef high = expand();
    assignment_[branch_fact] = 0;
    const NodeRef low = expand();
    assignment_[branch_fact] = -1;

    NodeRef result = kFalseNode;
    if (high != kFalseNode || low != kFalseNode) {
      result = static_cast<NodeRef>(nodes_.size());
      nodes_.push_back({branch_fact, high, low});
    }
    memo_.emplace(std::move(key), result);
    return result;
  }

  // Returns a terminal when the outcome is decided by the current partial
  // assignment. Otherwise fills `key` with a description of the residual
  // program and picks the first relevant fact in canonical order.
  std::optional<NodeRef> analyse(std::vector<std::uint32_t>& key, std::uint32_t& branch_fact) {
    eval_.evaluate(assignment_, state_);
    std::vector<AtomId> stack;
    for (const auto& lit : outcome_) {
      if (lit.value ? state_.is_false(lit.atom) : state_.is_true(lit.atom)) return kFalseNode;
      if (state_.is_undetermined(lit.atom)) {
        key.push_back(lit.atom * 2u + (lit.value ? 1u : 0u));
        stack.push_back(lit.atom);
      }
    }
    if (stack.empty()) return kTrueNode;
    key.push_back(sentinel);

    ++stamp_;
    for (AtomId a : stack) visited_[a] = stamp_;
    std::uint32_t best = static_cast<std::uint32_t>(gp_.num_facts());
    // Breadth-first over the undetermined part of the dependency graph, so
    // the key depends only on the residual program.
    for (std::size_t head = 0; head < stack.size(); ++head) {
      const AtomId atom = stack[head];
      if (gp_.is_fact(atom)) {
        best = std::min(best, static_cast<std::uint32_t>(gp_.fact_of_atom[atom]));
        continue;
      }
      for (std::uint32_t ri : rules_of_[atom]) {
        const auto& rule = gp_.rules[ri];
        bool alive = true;
        for (const auto& l : rule.body)
          if (!state_.literal_possible(l)) {
            alive = false;
            break;
          }
        if (!alive) continue;
        key.push_back(ri);
        for (const auto& l : rule.body) {
          if (state_.literal_true(l)) continue;
          key.push_back(l.atom * 2u + (l.positive ? 1u : 0u));
          if (visited_[l.atom] != stamp_) {
            visited_[l.atom] = stamp_;
            stack.push_back(l.atom);
          }
        }
        key.push_back(sentinel);
      }
    }
    if (best == gp_.num_facts()) {
      // Unreachable for stratified programs; fall back to any unassigned fact.
      for (std::uint32_t f = 0; f < assignment_.size(); ++f)
        if (assignment_[f] < 0) {
          best = f;
          break;
        }
      if (best == gp_.num_facts()) throw std::logic_error("undetermined outcome with every fact assigned");
    }
    branch_fact = best;
    return std::nullopt;
  }

  static constexpr std::uint32_t sentinel = 0xffffffffu;

  const ThreeValuedEvaluator& eval_;
  const GroundProgram& gp_;
  const Outcome& outcome_;
  std::vector<FactValue> assignment_;
  std::vector<std::vector<std::uint32_t>> rules_of_;
  std::vector<std::uint32_t> visited_;
  std::uint32_t stamp_ = 0;
  ThreeValuedState state_;
  std::vector<DecisionNode> nodes_;
  std::map<std::vector<std::uint32_t>, NodeRef> memo_;
};

}  // namespace detail

inline DecisionDiagram build_decision_diagram(const ThreeValuedEvaluator& evaluator, const Outcome& outcome) {
  return detail::DiagramBuilder(evaluator, outcome).build();
}

/// Evaluates a diagram bottom-up: each node is
/// (l_f (x) high) (+) (not-l_f (x) low), skipping false branches.
template <Parametrisation S>
std::optional<typename S::value_type> evaluate_diagram(const DecisionDiagram& diagram,
                                                       const FactLabels<typename S::value_type>& labels,
                                                       const S& semiring) {
  using V = typename S::value_type;
  if (diagram.root == kFalseNode) return std::nullopt;
  if (diagram.root == kTrueNode) return semiring.one();
  std::vector<V> values;
  values.reserve(diagram.nodes.size());
  auto branch = [&](const V& lit, NodeRef child) -> std::optional<V> {
    if (child == kFalseNode) return std::nullopt;
    if (child == kTrueNode) return lit;
    return semiring.times(lit, values[static_cast<std::size_t>(child)]);
  };
  for (const auto& node : diagram.nodes) {
    auto high = branch(labels.positive[node.fact], node.high);
    auto low = branch(labels.negative[node.fact], node.low);
    if (high && low) values.push_back(semiring.plus(*high, *low));
    else values.push_back(high ? *high : *low);
  }
  return values[static_cast<std::size_t>(diagram.root)];
}

// ---------------------------------------------------------------------------
// Queries

/// Precomputed inference structure for a fixed set of queries and evidence.
/// Labels may change between evaluations; the program structure may not.
class QueryPlan {
 public:
  QueryPlan(const GroundProgram& gp, std::vector<AtomId> queries,
            std::vector<std::pair<AtomId, bool>> evidence, const InferenceOptions& options = {})
      : evaluator_(gp), queries_(std::move(queries)), options_(options) {
    check_budget(gp, options.budget);
    for (const auto& [atom, value] : evidence) evidence_.push_back({atom, value});
    for (AtomId q : queries_) {
      Outcome with = evidence_, without = evidence_;
      with.push_back({q, true});
      without.push_back({q, false});
      outcomes_.push_back(std::move(with));
      outcomes_.push_back(std::move(without));
    }
    outcomes_.push_back(evidence_);
    if (options.strategy == Strategy::decision_tree)
      for (const auto& o : outcomes_) diagrams_.push_back(build_decision_diagram(evaluator_, o));
  }

  const GroundProgram& program() const { return evaluator_.program(); }
  const std::vector<AtomId>& queries() const { return queries_; }
  bool has_evidence() const { return !evidence_.empty(); }
  const std::vector<DecisionDiagram>& diagrams() const { return diagrams_; }

  /// Conditional label of every query given the evidence (the plain query
  /// label when there is no evidence).
  template <Parametrisation S>
  std::vector<typename S::value_type> evaluate(const FactLabels<typename S::value_type>& labels,
                                               const S& semiring) const {
    using V = typename S::value_type;
    std::vector<std::optional<V>> raw;
    if (options_.strategy == Strategy::decision_tree) {
      // Only the outcomes this semiring's conditioning reads are evaluated.
      raw.resize(diagrams_.size());
      for (std::size_t k = 0; k < diagrams_.size(); ++k) {
        const bool is_evidence = k + 1 == diagrams_.size();
        const bool is_complement = !is_evidence && k % 2 == 1;
        const bool needed = is_evidence ? has_evidence() && !S::conditions_via_complement
                                        : !is_complement || (has_evidence() && S::conditions_via_complement);
        if (needed) raw[k] = evaluate_diagram(diagrams_[k], labels, semiring);
      }
      if (has_evidence() && S::conditions_via_complement) {
        // Evidence holds somewhere iff some query outcome or its complement does.
        const bool possible = diagrams_.back().root != kFalseNode;
        raw.back() = possible ? std::optional<V>(semiring.one()) : std::nullopt;
      }
    } else {
      raw = enumerate_outcomes(evaluator_, outcomes_, labels, semiring);
    }

    const std::optional<V>& evidence_label = raw.back();
    if (has_evidence() && !evidence_label)
      throw UndefinedResult("evidence holds in no interpretation");
    std::vector<V> out;
    out.reserve(queries_.size());
    for (std::size_t i = 0; i < queries_.size(); ++i) {
      const std::optional<V>& joint = raw[2 * i];
      const std::optional<V>& rest = raw[2 * i + 1];
      const V numerator = joint ? *joint : semiring.zero();
      if (!has_evidence()) {
        out.push_back(numerator);
        continue;
      }
      V denominator = *evidence_label;
      if constexpr (S::conditions_via_complement) {
        if (joint && rest) denominator = semiring.plus(*joint, *rest);
        else denominator = joint ? *joint : *rest;
      }
      out.push_back(semiring.divide(numerator, denominator));
    }
    return out;
  }

  template <Parametrisation S>
  std::vector<typename S::value_type> evaluate(const S& semiring) const {
    return evaluate(make_fact_labels(semiring, std::span<const Label>(program().fact_labels)), semiring);
  }

 private:
  ThreeValuedEvaluator evaluator_;
  std::vector<AtomId> queries_;
  Outcome evidence_;
  InferenceOptions options_;
  std::vector<Outcome> outcomes_;
  std::vector<DecisionDiagram> diagrams_;
};

/// Label of a query: the sum over interpretations where it holds.
template <Parametrisation S>
typename S::value_type query_label(const GroundProgram& gp, const Atom& query, const S& semiring,
                                   const InferenceOptions& options = {}) {
  QueryPlan plan(gp, {gp.id_of(query)}, {}, options);
  return plan.evaluate(semiring).front();
}

/// Label of a query given evidence, label(q and e) divided by label(e).
template <Parametrisation S>
typename S::value_type conditional_query_label(const GroundProgram& gp, const Atom& query,
                                               const std::vector<Evidence>& evidence, const S& semiring,
                                               const InferenceOptions& options = {}) {
  std::vector<std::pair<AtomId, bool>> ev;
  for (const auto& e : evidence) ev.push_back({gp.id_of(e.atom), e.value});
  QueryPlan plan(gp, {gp.id_of(query)}, std::move(ev), options);
  return plan.evaluate(semiring).front();
}

}  // namespace aprob
