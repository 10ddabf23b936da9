#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "aprob/grounding.hpp"
#include "aprob/program.hpp"

namespace aprob {

using AtomId = std::uint32_t;

struct BodyLiteral {
  AtomId atom;
  bool positive;
};

struct GroundRule {
  AtomId head;
  std::vector<BodyLiteral> body;
};

/// Ground program with interned atoms. Algebraic facts are numbered in
/// canonical order (lexicographic by atom text).
struct GroundProgram {
  std::vector<std::string> atom_names;
  std::unordered_map<std::string, AtomId> atom_index;
  std::vector<AtomId> fact_atoms;
  std::vector<Label> fact_labels;
  std::vector<int> fact_of_atom;
  std::vector<GroundRule> rules;
  std::vector<AtomId> queries;
  std::vector<std::pair<AtomId, bool>> evidence;

  std::size_t num_facts() const { return fact_atoms.size(); }
  std::size_t num_atoms() const { return atom_names.size(); }
  bool is_fact(AtomId a) const { return fact_of_atom[a] >= 0; }

  AtomId intern(const std::string& text) {
    auto [it, fresh] = atom_index.emplace(text, static_cast<AtomId>(atom_names.size()));
    if (fresh) {
      atom_names.push_back(text);
      fact_of_atom.push_back(-1);
    }
    return it->second;
  }

  AtomId id_of(const Atom& atom) const {
    auto it = atom_index.find(to_string(atom));
    if (it == atom_index.end()) throw std::out_of_range("unknown atom " + to_string(atom));
    return it->second;
  }
};

/// Grounds `program` and interns every atom it mentions.
inline GroundProgram make_ground_program(const Program& program) {
  const Program grounded = ground(program);
  GroundProgram gp;

  std::vector<const AlgebraicFact*> facts;
  for (const auto& f : grounded.facts) facts.push_back(&f);
  std::sort(facts.begin(), facts.end(),
            [](const AlgebraicFact* a, const AlgebraicFact* b) { return to_string(a->atom) < to_string(b->atom); });
  for (const AlgebraicFact* f : facts) {
    const AtomId id = gp.intern(to_string(f->atom));
    gp.fact_of_atom[id] = static_cast<int>(gp.fact_atoms.size());
    gp.fact_atoms.push_back(id);
    gp.fact_labels.push_back(f->label);
  }
  for (const auto& c : grounded.clauses) {
    GroundRule rule{gp.intern(to_string(c.head)), {}};
    for (const auto& lit : c.body) rule.body.push_back({gp.intern(to_string(lit.atom)), lit.positive});
    gp.rules.push_back(std::move(rule));
  }
  for (const auto& q : grounded.queries) gp.queries.push_back(gp.intern(to_string(q)));
  for (const auto& e : grounded.evidence) gp.evidence.push_back({gp.intern(to_string(e.atom)), e.value});
  return gp;
}

/// Truth values under a partial assignment of the algebraic facts.
/// `definitely_true` atoms hold in every completion, atoms outside
/// `possibly_true` hold in none. With every fact assigned both sets equal
/// the unique (stratified) minimal model.
struct ThreeValuedState {
  std::vector<std::uint8_t> definitely_true;
  std::vector<std::uint8_t> possibly_true;
  std::vector<std::uint32_t> scratch_counts;
  std::vector<AtomId> scratch_queue;

  bool is_true(AtomId a) const { return definitely_true[a]; }
  bool is_false(AtomId a) const { return !possibly_true[a]; }
  bool is_undetermined(AtomId a) const { return possibly_true[a] && !definitely_true[a]; }

  bool literal_true(const BodyLiteral& l) const {
    return l.positive ? definitely_true[l.atom] : !possibly_true[l.atom];
  }
  bool literal_possible(const BodyLiteral& l) const {
    return l.positive ? possibly_true[l.atom] : !definitely_true[l.atom];
  }
};

/// Fact assignment value for ThreeValuedEvaluator: 1 true, 0 false, -1 unknown.
using FactValue = std::int8_t;

/// Evaluates a ground program stratum by stratum. Within a stratum, rules
/// fire by counting down their pending same-stratum positive literals.
class ThreeValuedEvaluator {
 public:
  explicit ThreeValuedEvaluator(const GroundProgram& gp) : gp_(&gp) {
    const std::size_t n = gp.num_atoms();
    stratum_.assign(n, 0);
    derived_.assign(n, 0);
    for (const auto& r : gp.rules) derived_[r.head] = 1;

    // Longest-path layering; a negative cycle would grow strata without bound.
    for (std::size_t round = 0;; ++round) {
      bool changed = false;
      for (const auto& r : gp.rules) {
        std::uint32_t s = stratum_[r.head];
        for (const auto& l : r.body) s = std::max(s, stratum_[l.atom] + (l.positive ? 0u : 1u));
        if (s != stratum_[r.head]) {
          stratum_[r.head] = s;
          changed = true;
        }
      }
      if (!changed) break;
      if (round > n + 1) throw std::invalid_argument("program is not stratified (negation through recursion)");
    }
    std::uint32_t max_stratum = 0;
    for (const auto& r : gp.rules) max_stratum = std::max(max_stratum, stratum_[r.head]);
    by_stratum_.assign(max_stratum + 1, {});
    for (std::uint32_t i = 0; i < gp.rules.size(); ++i) by_stratum_[stratum_[gp.rules[i].head]].push_back(i);

    occurrences_.assign(n, {});
    pending_.assign(gp.rules.size(), 0);
    for (std::uint32_t i = 0; i < gp.rules.size(); ++i) {
      const auto& r = gp.rules[i];
      for (const auto& l : r.body) {
        if (is_pending(r, l)) {
          occurrences_[l.atom].push_back(i);
          ++pending_[i];
        }
      }
    }
  }

  const GroundProgram& program() const { return *gp_; }

  void evaluate(std::span<const FactValue> facts, ThreeValuedState& state) const {
    const GroundProgram& gp = *gp_;
    const std::size_t n = gp.num_atoms();
    state.definitely_true.assign(n, 0);
    state.possibly_true.assign(n, 0);
    for (std::size_t f = 0; f < gp.num_facts(); ++f) {
      const AtomId a = gp.fact_atoms[f];
      state.definitely_true[a] = facts[f] == 1;
      state.possibly_true[a] = facts[f] != 0;
    }
    state.scratch_counts.resize(gp.rules.size());
    for (const auto& rules : by_stratum_) {
      fixpoint(rules, state, state.definitely_true, /*definite=*/true);
      fixpoint(rules, state, state.possibly_true, /*definite=*/false);
    }
  }

 private:
  bool is_pending(const GroundRule& r, const BodyLiteral& l) const {
    return l.positive && derived_[l.atom] && stratum_[l.atom] == stratum_[r.head];
  }

  void fixpoint(const std::vector<std::uint32_t>& rules, ThreeValuedState& state,
                std::vector<std::uint8_t>& target, bool definite) const {
    const GroundProgram& gp = *gp_;
    auto& counts = state.scratch_counts;
    auto& queue = state.scratch_queue;
    queue.clear();
    constexpr std::uint32_t dead = 0xffffffffu;
    for (std::uint32_t ri : rules) {
      const auto& r = gp.rules[ri];
      std::uint32_t count = pending_[ri];
      for (const auto& l : r.body) {
        if (is_pending(r, l)) continue;
        const bool ok = definite ? state.literal_true(l) : state.literal_possible(l);
        if (!ok) {
          count = dead;
          break;
        }
      }
      counts[ri] = count;
      if (count == 0 && !target[r.head]) {
        target[r.head] = 1;
        queue.push_back(r.head);
      }
    }
    while (!queue.empty()) {
      const AtomId a = queue.back();
      queue.pop_back();
      for (std::uint32_t ri : occurrences_[a]) {
        if (counts[ri] == dead) continue;
        if (--counts[ri] == 0) {
          const AtomId h = gp.rules[ri].head;
          if (!target[h]) {
            target[h] = 1;
            queue.push_back(h);
          }
        }
      }
    }
  }

  const GroundProgram* gp_;
  std::vector<std::uint32_t> stratum_;
  std::vector<std::uint8_t> derived_;
  std::vector<std::vector<std::uint32_t>> by_stratum_;
  std::vector<std::vector<std::uint32_t>> occurrences_;
  std::vector<std::uint32_t> pending_;
};

/// Least model of the program under a total interpretation of the facts.
inline std::set<std::string> minimal_model(const GroundProgram& gp, const std::vector<bool>& interpretation) {
  if (interpretation.size() != gp.num_facts())
    throw std::invalid_argument("interpretation must assign every algebraic fact");
  std::vector<FactValue> values(interpretation.begin(), interpretation.end());
  ThreeValuedEvaluator evaluator(gp);
  ThreeValuedState state;
  evaluator.evaluate(values, state);
  std::set<std::string> model;
  for (AtomId a = 0; a < gp.num_atoms(); ++a)
    if (state.definitely_true[a]) model.insert(gp.atom_names[a]);
  return model;
}

}  // namespace aprob
