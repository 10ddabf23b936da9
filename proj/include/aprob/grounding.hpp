#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "aprob/program.hpp"

namespace aprob {

class GroundingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

using Binding = std::map<std::string, std::string>;

inline std::optional<Binding> match(const Atom& pattern, const Atom& ground, Binding binding) {
  if (pattern.predicate != ground.predicate || pattern.args.size() != ground.args.size())
    return std::nullopt;
  for (std::size_t i = 0; i < pattern.args.size(); ++i) {
    const Term& t = pattern.args[i];
    const std::string& value = ground.args[i].name;
    if (!t.is_variable) {
      if (t.name != value) return std::nullopt;
      continue;
    }
    auto [it, fresh] = binding.emplace(t.name, value);
    if (!fresh && it->second != value) return std::nullopt;
  }
  return binding;
}

inline Atom substitute(const Atom& atom, const Binding& binding) {
  Atom out{atom.predicate, {}};
  out.args.reserve(atom.args.size());
  for (const auto& t : atom.args) {
    if (!t.is_variable) {
      out.args.push_back(t);
      continue;
    }
    auto it = binding.find(t.name);
    if (it == binding.end()) throw GroundingError("unbound variable " + t.name);
    out.args.push_back({it->second, false});
  }
  return out;
}

inline std::set<std::string> variables_of(const Atom& atom) {
  std::set<std::string> vars;
  for (const auto& t : atom.args)
    if (t.is_variable) vars.insert(t.name);
  return vars;
}

inline bool clause_is_ground(const Clause& c) {
  if (!c.head.is_ground()) return false;
  for (const auto& lit : c.body)
    if (!lit.atom.is_ground()) return false;
  return true;
}

}  // namespace detail

/// Instantiates every non-ground clause over the atoms that can possibly be
/// derived (bottom-up join of the positive body literals). Ground clauses are
/// kept as written. Every variable must occur in a positive body literal.
inline Program ground(const Program& program) {
  bool has_constants = false;
  auto note_constants = [&](const Atom& a) {
    for (const auto& t : a.args)
      if (!t.is_variable) has_constants = true;
  };
  for (const auto& f : program.facts) note_constants(f.atom);
  for (const auto& c : program.clauses) {
    note_constants(c.head);
    for (const auto& lit : c.body) note_constants(lit.atom);
  }

  std::vector<const Clause*> templates;
  Program out{program.facts, {}, program.queries, program.evidence};
  for (const auto& c : program.clauses) {
    if (detail::clause_is_ground(c)) {
      out.clauses.push_back(c);
      continue;
    }
    std::set<std::string> bound;
    for (const auto& lit : c.body)
      if (lit.positive)
        for (const auto& v : detail::variables_of(lit.atom)) bound.insert(v);
    auto check = [&](const Atom& a) {
      for (const auto& v : detail::variables_of(a))
        if (!bound.count(v)) throw GroundingError("unbounded variable " + v + " in clause " + to_string(c));
    };
    if (!has_constants) throw GroundingError("clause " + to_string(c) + " has variables but the program has no constants");
    check(c.head);
    for (const auto& lit : c.body) check(lit.atom);
    templates.push_back(&c);
  }

  // Atoms that might be true in some interpretation, indexed by predicate.
  std::map<std::string, std::vector<Atom>> possible;
  std::set<std::string> possible_text;
  auto add_possible = [&](const Atom& a) {
    if (possible_text.insert(to_string(a)).second) {
      possible[a.predicate].push_back(a);
      return true;
    }
    return false;
  };
  for (const auto& f : program.facts) add_possible(f.atom);
  for (const auto& c : out.clauses) add_possible(c.head);

  std::set<std::string> emitted;
  for (const auto& c : out.clauses) emitted.insert(to_string(c));

  bool changed = !templates.empty();
  while (changed) {
    changed = false;
    for (const Clause* c : templates) {
      std::vector<const Literal*> positives;
      for (const auto& lit : c->body)
        if (lit.positive) positives.push_back(&lit);

      std::vector<detail::Binding> frontier{detail::Binding{}};
      for (const Literal* lit : positives) {
        std::vector<detail::Binding> next;
        auto it = possible.find(lit->atom.predicate);
        if (it == possible.end()) {
          frontier.clear();
          break;
        }
        // Copy: add_possible below may grow the vector during this pass.
        const std::vector<Atom> candidates = it->second;
        for (const auto& b : frontier)
          for (const auto& cand : candidates)
            if (auto m = detail::match(lit->atom, cand, b)) next.push_back(std::move(*m));
        frontier = std::move(next);
      }
      for (const auto& b : frontier) {
        Clause inst{detail::substitute(c->head, b), {}};
        for (const auto& lit : c->body) inst.body.push_back({detail::substitute(lit.atom, b), lit.positive});
        if (!emitted.insert(to_string(inst)).second) continue;
        if (add_possible(inst.head)) changed = true;
        out.clauses.push_back(std::move(inst));
        changed = true;
      }
    }
  }
  return out;
}

}  // namespace aprob
