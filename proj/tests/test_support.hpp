#pragma once

#include <cstdint>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "aprob/bayes_net.hpp"
#include "aprob/opinion.hpp"
#include "aprob/random.hpp"

namespace aprob::testing {

/// Draws from Beta(a, b) via two gamma variates.
inline double sample_beta(Rng& rng, double a, double b) {
  std::gamma_distribution<double> ga(a, 1.0), gb(b, 1.0);
  const double x = ga(rng), y = gb(rng);
  return x / (x + y);
}

struct SampleMoments {
  double mean = 0.0;
  double variance = 0.0;
};

inline SampleMoments moments(const std::vector<double>& xs) {
  double sum = 0.0, sq = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  for (double x : xs) sq += (x - mean) * (x - mean);
  return {mean, sq / static_cast<double>(xs.size() - 1)};
}

/// Opinion of a random Beta distribution with both parameters in [1, 1 + spread].
inline Opinion random_opinion(Rng& rng, double spread = 20.0) {
  return beta_to_opinion({1.0 + spread * uniform01(rng), 1.0 + spread * uniform01(rng)});
}

// A randomly generated propositional program together with a naive oracle
// that shares no code with the engine.
struct RandomProgram {
  struct Rule {
    std::string head;
    std::vector<std::pair<std::string, bool>> body;
  };
  std::vector<std::pair<std::string, double>> facts;
  std::vector<Rule> rules;
  std::vector<std::string> derived;

  std::string text() const {
    std::string out;
    char buf[64];
    for (const auto& [name, p] : facts) {
      std::snprintf(buf, sizeof buf, "%.17g::%s.\n", p, name.c_str());
      out += buf;
    }
    for (const auto& r : rules) {
      out += r.head + " :- ";
      for (std::size_t i = 0; i < r.body.size(); ++i)
        out += (i ? ", " : "") + std::string(r.body[i].second ? "" : "\\+") + r.body[i].first;
      out += ".\n";
    }
    return out;
  }

  std::set<std::string> model(std::uint32_t assignment) const {
    std::set<std::string> truth;
    for (std::size_t i = 0; i < facts.size(); ++i)
      if (assignment >> i & 1u) truth.insert(facts[i].first);
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& r : rules) {
        if (truth.count(r.head)) continue;
        bool holds = true;
        for (const auto& [atom, positive] : r.body)
          if (truth.count(atom) != (positive ? 1u : 0u)) holds = false;
        if (holds) changed = truth.insert(r.head).second || changed;
      }
    }
    return truth;
  }

  double weight(std::uint32_t assignment) const {
    double w = 1.0;
    for (std::size_t i = 0; i < facts.size(); ++i) w *= (assignment >> i & 1u) ? facts[i].second : 1.0 - facts[i].second;
    return w;
  }

  /// P(query | evidence holds), or P(query) when evidence is empty.
  double oracle(const std::string& query, const std::string& evidence = "") const {
    double joint = 0.0, total = 0.0;
    for (std::uint32_t s = 0; s < (1u << facts.size()); ++s) {
      const auto m = model(s);
      if (!evidence.empty() && !m.count(evidence)) continue;
      total += weight(s);
      if (m.count(query)) joint += weight(s);
    }
    return evidence.empty() ? joint : joint / total;
  }
};

/// Facts f0..f(n-1), derived atoms d0..d5. Bodies mix facts (optionally
/// negated) and derived atoms, including recursive references.
inline RandomProgram random_program(Rng& rng, std::size_t max_facts, bool allow_negation) {
  RandomProgram p;
  const std::size_t n = 1 + static_cast<std::size_t>(uniform01(rng) * max_facts) % max_facts;
  for (std::size_t i = 0; i < n; ++i) p.facts.push_back({"f" + std::to_string(i), 0.05 + 0.9 * uniform01(rng)});
  auto pick = [&](std::size_t k) { return static_cast<std::size_t>(uniform01(rng) * k) % k; };
  for (int d = 0; d < 6; ++d) p.derived.push_back("d" + std::to_string(d));
  for (int d = 0; d < 6; ++d) {
    const std::size_t n_rules = 1 + pick(3);
    for (std::size_t r = 0; r < n_rules; ++r) {
      RandomProgram::Rule rule{p.derived[d], {}};
      const std::size_t len = 1 + pick(3);
      for (std::size_t l = 0; l < len; ++l) {
        if (uniform01(rng) < 0.6) {
          const bool positive = !allow_negation || uniform01(rng) < 0.7;
          rule.body.push_back({p.facts[pick(n)].first, positive});
        } else {
          rule.body.push_back({p.derived[pick(6)], true});
        }
      }
      p.rules.push_back(std::move(rule));
    }
  }
  return p;
}

/// Random DAG over n0..n(n-1): each node takes up to `max_parents` parents
/// among earlier nodes, CPT rows uniform in [0.05, 0.95].
inline BayesNetwork random_network(Rng& rng, std::size_t n_nodes, std::size_t max_parents = 3) {
  BayesNetwork bn;
  bn.name = "random";
  for (std::size_t i = 0; i < n_nodes; ++i) bn.nodes.push_back("n" + std::to_string(i));
  for (std::size_t i = 1; i < n_nodes; ++i) {
    std::vector<std::string> ps;
    for (std::size_t j = 0; j < i; ++j)
      if (ps.size() < max_parents && uniform01(rng) < 0.5) ps.push_back(bn.nodes[j]);
    if (!ps.empty()) bn.parents[bn.nodes[i]] = ps;
  }
  for (const auto& node : bn.nodes) {
    std::vector<Label> rows;
    for (std::size_t r = 0; r < bn.num_rows(node); ++r) rows.emplace_back(0.05 + 0.9 * uniform01(rng));
    bn.cpts[node] = std::move(rows);
  }
  return bn;
}

/// P(node | evidence) by summing the full joint table built from the CPTs.
/// Parents are looked up by name, rows follow the documented bit layout.
inline double joint_table_probability(const BayesNetwork& bn, const std::string& node,
                                      const std::map<std::string, bool>& evidence) {
  const std::size_t n = bn.nodes.size();
  double joint = 0.0, total = 0.0;
  for (std::uint64_t state = 0; state < (std::uint64_t{1} << n); ++state) {
    std::map<std::string, bool> value;
    for (std::size_t i = 0; i < n; ++i) value[bn.nodes[i]] = state >> i & 1u;
    bool consistent = true;
    for (const auto& [name, v] : evidence) consistent = consistent && value[name] == v;
    if (!consistent) continue;
    double p = 1.0;
    for (const auto& x : bn.nodes) {
      const auto& ps = bn.parents_of(x);
      std::size_t row = 0;
      for (const auto& parent : ps) row = row * 2 + (value[parent] ? 0 : 1);
      const double px = std::get<double>(bn.cpts.at(x)[row]);
      p *= value[x] ? px : 1.0 - px;
    }
    total += p;
    if (value[node]) joint += p;
  }
  return joint / total;
}

}  // namespace aprob::testing
