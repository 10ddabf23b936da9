#pragma once

// Reader for the ProbLog-style program syntax:
//
//   0.05::burglary.                 probabilistic fact
//   0.5,0.3,0.2,0.5::f.             opinion-labelled fact <b,d,u,a>
//   alarm :- burglary, \+quake.     background clause
//   person(ann).                    certain fact
//   query(alarm).
//   evidence(alarm, true).
//
// '%' starts a comment that runs to the end of the line.

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aprob/program.hpp"

namespace aprob {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                           ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

namespace detail {

enum class Tok { ident, variable, number, implies, label_sep, negation, lparen, rparen, comma, dot, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line, column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> tokenize() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      const std::size_t line = line_, col = col_;
      if (pos_ >= text_.size()) {
        out.push_back({Tok::end, "", line, col});
        return out;
      }
      const char c = text_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c)) ||
          (c == '-' && pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
        out.push_back({Tok::number, lex_number(), line, col});
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string word = lex_word();
        const bool var = std::isupper(static_cast<unsigned char>(word[0])) || word[0] == '_';
        out.push_back({var ? Tok::variable : Tok::ident, std::move(word), line, col});
      } else if (starts_with("::")) {
        advance(2);
        out.push_back({Tok::label_sep, "::", line, col});
      } else if (starts_with(":-")) {
        advance(2);
        out.push_back({Tok::implies, ":-", line, col});
      } else if (starts_with("\\+")) {
        advance(2);
        out.push_back({Tok::negation, "\\+", line, col});
      } else {
        Tok kind;
        switch (c) {
          case '(': kind = Tok::lparen; break;
          case ')': kind = Tok::rparen; break;
          case ',': kind = Tok::comma; break;
          case '.': kind = Tok::dot; break;
          default: throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        }
        advance(1);
        out.push_back({kind, std::string(1, c), line, col});
      }
    }
  }

 private:
  bool starts_with(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i, ++pos_) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance(1);
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
      } else {
        break;
      }
    }
  }

  std::string lex_word() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      advance(1);
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string lex_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance(1);
    };
    if (text_[pos_] == '-') advance(1);
    digits();
    // A '.' is a decimal point only when a digit follows; otherwise it ends the clause.
    if (pos_ + 1 < text_.size() && text_[pos_] == '.' &&
        std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      advance(1);
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        advance(look - pos_);
        digits();
      }
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string_view text_;
  std::size_t pos_ = 0, line_ = 1, col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Program parse() {
    while (peek().kind != Tok::end) statement();
    validate();
    return std::move(program_);
  }

 private:
  struct Position {
    std::size_t line, column;
  };

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(std::string("expected ") + what, peek());
    return next();
  }
  [[noreturn]] static void fail(const std::string& message, const Token& at) {
    throw ParseError(message + (at.kind == Tok::end ? " at end of input" : " near '" + at.text + "'"),
                     at.line, at.column);
  }

  double number(const Token& t) {
    double value = 0.0;
    const char* first = t.text.data();
    const char* last = first + t.text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) fail("malformed number", t);
    return value;
  }

  void statement() {
    const Token& start = peek();
    if (start.kind == Tok::number) {
      labelled_fact();
      return;
    }
    if (start.kind == Tok::ident && peek(1).kind == Tok::lparen &&
        (start.text == "query" || start.text == "evidence")) {
      directive();
      return;
    }
    Clause clause{atom(), {}};
    if (peek().kind == Tok::implies) {
      next();
      clause.body.push_back(literal());
      while (peek().kind == Tok::comma) {
        next();
        clause.body.push_back(literal());
      }
    }
    expect(Tok::dot, "'.' at end of clause");
    clause_pos_.push_back({start.line, start.column});
    program_.clauses.push_back(std::move(clause));
  }

  void labelled_fact() {
    const Token& start = peek();
    std::vector<double> values{number(next())};
    while (peek().kind == Tok::comma) {
      next();
      values.push_back(number(expect(Tok::number, "number in label")));
    }
    expect(Tok::label_sep, "'::' after label");
    const Token& atom_tok = peek();
    Atom head = atom();
    if (peek().kind == Tok::implies) fail("probabilistic clauses are not supported; use an auxiliary fact", peek());
    expect(Tok::dot, "'.' at end of fact");
    if (!head.is_ground()) fail("algebraic facts must be ground", atom_tok);

    Label label;
    if (values.size() == 1) {
      if (!(values[0] >= 0.0 && values[0] <= 1.0))
        throw ParseError("probability label outside [0,1]", start.line, start.column);
      label = values[0];
    } else if (values.size() == 4) {
      try {
        label = Opinion(values[0], values[1], values[2], values[3]);
      } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("invalid opinion label: ") + e.what(), start.line, start.column);
      }
    } else {
      throw ParseError("a label is either p or b,d,u,a", start.line, start.column);
    }
    fact_pos_.push_back({start.line, start.column});
    program_.facts.push_back({std::move(head), label});
  }

  void directive() {
    const Token& name = next();
    expect(Tok::lparen, "'('");
    const Token& atom_tok = peek();
    Atom target = atom();
    if (!target.is_ground()) fail("queries and evidence must be ground", atom_tok);
    if (name.text == "query") {
      expect(Tok::rparen, "')'");
      program_.queries.push_back(std::move(target));
    } else {
      bool value = true;
      if (peek().kind == Tok::comma) {
        next();
        const Token& v = expect(Tok::ident, "true or false");
        if (v.text == "true") value = true;
        else if (v.text == "false") value = false;
        else fail("evidence value must be true or false", v);
      }
      expect(Tok::rparen, "')'");
      program_.evidence.push_back({std::move(target), value});
    }
    expect(Tok::dot, "'.' after directive");
  }

  Literal literal() {
    if (peek().kind == Tok::negation) {
      next();
      return {atom(), false};
    }
    return {atom(), true};
  }

  Atom atom() {
    const Token& name = expect(Tok::ident, "predicate name");
    Atom out{name.text, {}};
    if (peek().kind == Tok::lparen) {
      next();
      out.args.push_back(term());
      while (peek().kind == Tok::comma) {
        next();
        out.args.push_back(term());
      }
      expect(Tok::rparen, "')'");
    }
    return out;
  }

  Term term() {
    const Token& t = next();
    switch (t.kind) {
      case Tok::ident:
      case Tok::number: return {t.text, false};
      case Tok::variable: return {t.text, true};
      default: fail("expected a constant or variable", t);
    }
  }

  static bool unifies(const Atom& pattern, const Atom& ground) {
    if (pattern.predicate != ground.predicate || pattern.args.size() != ground.args.size()) return false;
    std::map<std::string, std::string> binding;
    for (std::size_t i = 0; i < pattern.args.size(); ++i) {
      const Term& p = pattern.args[i];
      if (!p.is_variable) {
        if (p.name != ground.args[i].name) return false;
      } else if (p.name != "_") {
        auto [it, fresh] = binding.emplace(p.name, ground.args[i].name);
        if (!fresh && it->second != ground.args[i].name) return false;
      }
    }
    return true;
  }

  void validate() {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < program_.facts.size(); ++i) {
      if (!seen.insert(to_string(program_.facts[i].atom)).second)
        throw ParseError("duplicate algebraic fact " + to_string(program_.facts[i].atom), fact_pos_[i].line,
                         fact_pos_[i].column);
    }
    for (std::size_t i = 0; i < program_.clauses.size(); ++i) {
      for (const auto& fact : program_.facts) {
        if (unifies(program_.clauses[i].head, fact.atom))
          throw ParseError("clause head " + to_string(program_.clauses[i].head) +
                               " unifies with algebraic fact " + to_string(fact.atom),
                           clause_pos_[i].line, clause_pos_[i].column);
      }
    }
    check_stratified();
  }

  // Negation through recursion has no unique least model; reject it.
  void check_stratified() {
    std::map<std::string, std::set<std::pair<std::string, bool>>> edges;
    for (const auto& c : program_.clauses)
      for (const auto& lit : c.body) edges[c.head.predicate].insert({lit.atom.predicate, !lit.positive});
    auto reaches = [&](const std::string& from, const std::string& to) {
      std::set<std::string> visited{from};
      std::vector<std::string> stack{from};
      while (!stack.empty()) {
        const std::string cur = stack.back();
        stack.pop_back();
        if (cur == to) return true;
        auto it = edges.find(cur);
        if (it == edges.end()) continue;
        for (const auto& [dst, neg] : it->second)
          if (visited.insert(dst).second) stack.push_back(dst);
      }
      return false;
    };
    for (std::size_t i = 0; i < program_.clauses.size(); ++i) {
      const auto& c = program_.clauses[i];
      for (const auto& lit : c.body) {
        if (!lit.positive && reaches(lit.atom.predicate, c.head.predicate))
          throw ParseError("negation of " + lit.atom.predicate + " is recursive through " + c.head.predicate,
                           clause_pos_[i].line, clause_pos_[i].column);
      }
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Program program_;
  std::vector<Position> fact_pos_, clause_pos_;
};

}  // namespace detail

inline Program parse_program(std::string_view text) {
  return detail::Parser(detail::Lexer(text).tokenize()).parse();
}

}  // namespace aprob
