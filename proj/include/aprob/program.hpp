#pragma once

#include <compare>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "aprob/semiring.hpp"

namespace aprob {

struct Term {
  std::string name;
  bool is_variable = false;

  friend auto operator<=>(const Term&, const Term&) = default;
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  bool is_ground() const {
    for (const auto& t : args)
      if (t.is_variable) return false;
    return true;
  }

  friend auto operator<=>(const Atom&, const Atom&) = default;
};

inline std::string to_string(const Atom& atom) {
  std::string out = atom.predicate;
  if (atom.args.empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    if (i) out += ',';
    out += atom.args[i].name;
  }
  out += ')';
  return out;
}

inline Atom make_atom(std::string predicate, const std::vector<std::string>& constants = {}) {
  Atom atom{std::move(predicate), {}};
  for (const auto& c : constants) atom.args.push_back({c, false});
  return atom;
}

struct Literal {
  Atom atom;
  bool positive = true;

  friend auto operator<=>(const Literal&, const Literal&) = default;
};

inline std::string to_string(const Literal& lit) {
  return lit.positive ? to_string(lit.atom) : "\\+" + to_string(lit.atom);
}

/// Canonical order on ground literals: by atom text, the positive literal
/// before the negative literal of the same atom.
inline bool canonical_literal_less(const Literal& a, const Literal& b) {
  const std::string ta = to_string(a.atom), tb = to_string(b.atom);
  if (ta != tb) return ta < tb;
  return a.positive && !b.positive;
}

struct AlgebraicFact {
  Atom atom;
  Label label;
};

/// Background clause. A clause with an empty body is a certain fact.
struct Clause {
  Atom head;
  std::vector<Literal> body;
};

inline std::string to_string(const Clause& clause) {
  std::string out = to_string(clause.head);
  if (!clause.body.empty()) {
    out += " :- ";
    for (std::size_t i = 0; i < clause.body.size(); ++i) {
      if (i) out += ", ";
      out += to_string(clause.body[i]);
    }
  }
  return out + '.';
}

struct Evidence {
  Atom atom;
  bool value = true;
};

struct Program {
  std::vector<AlgebraicFact> facts;
  std::vector<Clause> clauses;
  std::vector<Atom> queries;
  std::vector<Evidence> evidence;
};

/// Shortest %g rendering that reads back as the same double.
inline std::string number_text(double x) {
  char buf[40];
  for (int precision = 6; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

inline std::string label_text(const Label& label) {
  if (const auto* p = std::get_if<double>(&label)) return number_text(*p);
  const auto& op = std::get<Opinion>(label);
  return number_text(op.belief()) + ',' + number_text(op.disbelief()) + ',' + number_text(op.uncertainty()) + ',' +
         number_text(op.base_rate());
}

/// Writes a program back in the textual syntax accepted by parse_program.
inline std::string to_text(const Program& program) {
  std::string out;
  for (const auto& f : program.facts) out += label_text(f.label) + "::" + to_string(f.atom) + ".\n";
  for (const auto& c : program.clauses) out += to_string(c) + '\n';
  for (const auto& e : program.evidence)
    out += "evidence(" + to_string(e.atom) + (e.value ? ", true).\n" : ", false).\n");
  for (const auto& q : program.queries) out += "query(" + to_string(q) + ").\n";
  return out;
}

}  // namespace aprob
