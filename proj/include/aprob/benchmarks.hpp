#pragma once

// Shipped benchmark instances: Friends & Smokers and three small networks.

#include <cmath>
#include <string>
#include <vector>

#include "aprob/bayes_net.hpp"
#include "aprob/program.hpp"

namespace aprob {

enum class Friendship { uncertain, certain };

/// Friends & Smokers over persons p1..pn with a complete friendship graph:
///   smokes(X) :- stress(X).
///   smokes(X) :- friend(X, Y), influences(Y, X), smokes(Y).
///   asthma(X) :- smokes(X), asthma_risk(X).
/// Labelled facts are stress/1, asthma_risk/1 and influences/2 (ordered
/// pairs of distinct persons), plus friend/2 when friendships are uncertain.
/// Evidence is smokes(p1) = true and asthma(p2) = false; every other
/// smokes/asthma atom is queried.
inline Program friends_smokers_program(std::size_t n_persons, Friendship friendship = Friendship::uncertain) {
  if (n_persons < 2) throw std::invalid_argument("Friends & Smokers needs at least two persons");
  auto person = [](std::size_t i) { return "p" + std::to_string(i + 1); };
  auto var = [](const char* name) { return Term{name, true}; };

  Program program;
  for (std::size_t i = 0; i < n_persons; ++i) {
    program.facts.push_back({make_atom("stress", {person(i)}), 0.3});
    program.facts.push_back({make_atom("asthma_risk", {person(i)}), 0.4});
  }
  for (std::size_t i = 0; i < n_persons; ++i)
    for (std::size_t j = 0; j < n_persons; ++j) {
      if (i == j) continue;
      program.facts.push_back({make_atom("influences", {person(i), person(j)}), 0.2});
      const Atom f = make_atom("friend", {person(i), person(j)});
      if (friendship == Friendship::uncertain) program.facts.push_back({f, 0.5});
      else program.clauses.push_back({f, {}});
    }

  const Atom smokes_x{"smokes", {var("X")}}, smokes_y{"smokes", {var("Y")}};
  program.clauses.push_back({smokes_x, {{Atom{"stress", {var("X")}}, true}}});
  program.clauses.push_back({smokes_x,
                             {{Atom{"friend", {var("X"), var("Y")}}, true},
                              {Atom{"influences", {var("Y"), var("X")}}, true},
                              {smokes_y, true}}});
  program.clauses.push_back(
      {Atom{"asthma", {var("X")}}, {{smokes_x, true}, {Atom{"asthma_risk", {var("X")}}, true}}});

  program.evidence.push_back({make_atom("smokes", {person(0)}), true});
  program.evidence.push_back({make_atom("asthma", {person(1)}), false});
  for (std::size_t i = 0; i < n_persons; ++i) {
    if (i != 0) program.queries.push_back(make_atom("smokes", {person(i)}));
    if (i != 1) program.queries.push_back(make_atom("asthma", {person(i)}));
  }
  return program;
}

/// The shipped Friends & Smokers benchmark: four persons, certain friendships.
inline Program smokers_benchmark() { return friends_smokers_program(4, Friendship::certain); }

namespace detail {

inline BayesNetwork make_network(std::string name, std::vector<std::string> nodes,
                                 std::map<std::string, std::vector<std::string>> parents,
                                 const std::vector<std::string>& observed, const std::vector<std::string>& queried) {
  BayesNetwork bn{std::move(name), std::move(nodes), std::move(parents), {}, {}, {}};
  for (const auto& n : observed) bn.roles[n] = NodeRole::observed;
  for (const auto& n : queried) bn.roles[n] = NodeRole::queried;
  // Example CPTs so the files are usable on their own; experiments replace
  // them with sampled ground truths.
  Rng rng(derive_seed(0x6e6574, bn.nodes.size(), bn.parents.size()));
  for (const auto& node : bn.nodes) {
    std::vector<Label> rows;
    for (std::size_t r = 0; r < bn.num_rows(node); ++r)
      rows.emplace_back((5.0 + std::round(uniform01(rng) * 90.0)) / 100.0);
    bn.cpts[node] = std::move(rows);
  }
  return bn;
}

}  // namespace detail

/// Binary tree of seven nodes; leaves observed, internal nodes queried.
inline BayesNetwork net1() {
  return detail::make_network("net1", {"a", "b", "c", "d", "e", "f", "g"},
                              {{"b", {"a"}}, {"c", {"a"}}, {"d", {"b"}}, {"e", {"b"}}, {"f", {"c"}}, {"g", {"c"}}},
                              {"d", "e", "f", "g"}, {"a", "b", "c"});
}

/// Polytree in which c has two parents.
inline BayesNetwork net2() {
  return detail::make_network("net2", {"a", "b", "c", "d", "e", "f", "g"},
                              {{"c", {"a", "b"}}, {"d", {"c"}}, {"e", {"c"}}, {"f", {"d"}}, {"g", {"e"}}},
                              {"b", "f", "g"}, {"a", "c", "d", "e"});
}

/// Polytree in which e has three parents.
inline BayesNetwork net3() {
  return detail::make_network("net3", {"a", "b", "c", "d", "e", "f", "g"},
                              {{"d", {"a"}}, {"e", {"b", "c", "d"}}, {"f", {"e"}}, {"g", {"e"}}},
                              {"b", "f", "g"}, {"a", "c", "d", "e"});
}

inline std::vector<BayesNetwork> shipped_networks() { return {net1(), net2(), net3()}; }

}  // namespace aprob
