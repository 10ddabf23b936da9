#pragma once

// Binary Bayesian networks: representation, JSON I/O, compilation to
// programs, and the sampling steps of the sparse-data protocol.

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "aprob/opinion.hpp"
#include "aprob/program.hpp"
#include "aprob/random.hpp"

namespace aprob {

enum class NodeRole { latent, observed, queried };

/// A binary network. CPT rows of a node with k parents are numbered
/// 0 .. 2^k - 1; bit (k-1-i) of the row index is set when parent i is false,
/// so row 0 is the configuration with every parent true.
struct BayesNetwork {
  std::string name;
  std::vector<std::string> nodes;
  std::map<std::string, std::vector<std::string>> parents;
  std::map<std::string, NodeRole> roles;
  std::map<std::string, std::vector<Label>> cpts;
  /// Observed values; observed nodes missing here are taken to be true.
  std::map<std::string, bool> evidence;

  std::size_t index_of(const std::string& node) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i] == node) return i;
    throw std::invalid_argument("unknown node '" + node + "'");
  }

  const std::vector<std::string>& parents_of(const std::string& node) const {
    static const std::vector<std::string> none;
    auto it = parents.find(node);
    return it == parents.end() ? none : it->second;
  }

  NodeRole role_of(const std::string& node) const {
    auto it = roles.find(node);
    return it == roles.end() ? NodeRole::latent : it->second;
  }

  std::size_t num_rows(const std::string& node) const { return std::size_t{1} << parents_of(node).size(); }
};

/// Index-based view used by the samplers: parents by node index and a
/// topological order.
struct NetworkIndex {
  std::vector<std::vector<std::size_t>> parents;
  std::vector<std::size_t> order;

  std::size_t row_of(std::size_t node, const std::vector<std::uint8_t>& values) const {
    std::size_t row = 0;
    for (std::size_t p : parents[node]) row = (row << 1) | (values[p] ? 0u : 1u);
    return row;
  }
};

namespace detail {

inline bool valid_identifier(const std::string& s) {
  if (s.empty() || !(s[0] >= 'a' && s[0] <= 'z')) return false;
  for (char c : s)
    if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_')) return false;
  return true;
}

}  // namespace detail

/// Checks names, parent references, CPT sizes and acyclicity, and returns the
/// index view.
inline NetworkIndex index_network(const BayesNetwork& bn) {
  NetworkIndex idx;
  const std::size_t n = bn.nodes.size();
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < n; ++i) {
    if (!detail::valid_identifier(bn.nodes[i]))
      throw std::invalid_argument("node name '" + bn.nodes[i] + "' is not a lowercase identifier");
    if (!pos.emplace(bn.nodes[i], i).second) throw std::invalid_argument("duplicate node '" + bn.nodes[i] + "'");
  }
  auto lookup = [&](const std::string& node) {
    auto it = pos.find(node);
    if (it == pos.end()) throw std::invalid_argument("unknown node '" + node + "'");
    return it->second;
  };
  for (const auto& [node, _] : bn.parents) lookup(node);
  for (const auto& [node, _] : bn.roles) lookup(node);
  for (const auto& [node, _] : bn.evidence) lookup(node);

  idx.parents.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& p : bn.parents_of(bn.nodes[i])) {
      const std::size_t j = lookup(p);
      if (j == i) throw std::invalid_argument("node '" + p + "' is its own parent");
      idx.parents[i].push_back(j);
    }
    if (idx.parents[i].size() > 20) throw std::invalid_argument("node '" + bn.nodes[i] + "' has too many parents");
  }
  for (const auto& [node, rows] : bn.cpts) {
    lookup(node);
    if (rows.size() != bn.num_rows(node))
      throw std::invalid_argument("CPT of '" + node + "' has " + std::to_string(rows.size()) + " rows, expected " +
                                  std::to_string(bn.num_rows(node)));
  }

  // Kahn's algorithm, smallest index first for a stable order.
  std::vector<std::size_t> indegree(n, 0);
  std::vector<std::vector<std::size_t>> children(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t p : idx.parents[i]) {
      ++indegree[i];
      children[p].push_back(i);
    }
  std::vector<bool> done(n, false);
  while (idx.order.size() < n) {
    std::size_t next = n;
    for (std::size_t i = 0; i < n; ++i)
      if (!done[i] && indegree[i] == 0) {
        next = i;
        break;
      }
    if (next == n) throw std::invalid_argument("network '" + bn.name + "' is cyclic");
    done[next] = true;
    idx.order.push_back(next);
    for (std::size_t c : children[next]) --indegree[c];
  }
  return idx;
}

/// Name of the algebraic fact holding CPT row `row` of `node`, e.g. cpt_b_a
/// and cpt_b_na for the two rows of b with parent a.
inline std::string cpt_fact_name(const BayesNetwork& bn, const std::string& node, std::size_t row) {
  const auto& ps = bn.parents_of(node);
  std::string out = "cpt_" + node;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const bool negated = (row >> (ps.size() - 1 - i)) & 1u;
    out += negated ? "_n" : "_";
    out += ps[i];
  }
  return out;
}

/// One algebraic fact per CPT row and one clause per row:
///   x :- <parent literals of the row>, cpt_x_<row>.
/// Queried nodes become queries and observed nodes evidence.
inline Program compile_bn(const BayesNetwork& bn) {
  index_network(bn);
  Program program;
  for (const auto& node : bn.nodes) {
    auto cpt = bn.cpts.find(node);
    if (cpt == bn.cpts.end()) throw std::invalid_argument("network has no CPT for node '" + node + "'");
    const auto& ps = bn.parents_of(node);
    for (std::size_t row = 0; row < cpt->second.size(); ++row) {
      const Atom fact = make_atom(cpt_fact_name(bn, node, row));
      program.facts.push_back({fact, cpt->second[row]});
      Clause clause{make_atom(node), {}};
      for (std::size_t i = 0; i < ps.size(); ++i)
        clause.body.push_back({make_atom(ps[i]), !((row >> (ps.size() - 1 - i)) & 1u)});
      clause.body.push_back({fact, true});
      program.clauses.push_back(std::move(clause));
    }
  }
  for (const auto& node : bn.nodes) {
    switch (bn.role_of(node)) {
      case NodeRole::queried: program.queries.push_back(make_atom(node)); break;
      case NodeRole::observed: {
        auto it = bn.evidence.find(node);
        program.evidence.push_back({make_atom(node), it == bn.evidence.end() ? true : it->second});
        break;
      }
      case NodeRole::latent: break;
    }
  }
  return program;
}

/// Ground-truth probabilities, indexed by node index and CPT row.
using CptTable = std::vector<std::vector<double>>;

/// Every CPT row independently uniform on [0, 1].
inline CptTable sample_ground_truth(const BayesNetwork& bn, Rng& rng) {
  CptTable truth;
  for (const auto& node : bn.nodes) {
    std::vector<double> rows(bn.num_rows(node));
    for (auto& p : rows) p = uniform01(rng);
    truth.push_back(std::move(rows));
  }
  return truth;
}

/// Copy of `bn` whose CPTs are the given probabilities.
inline BayesNetwork with_probabilities(const BayesNetwork& bn, const CptTable& truth) {
  BayesNetwork out = bn;
  out.cpts.clear();
  for (std::size_t i = 0; i < bn.nodes.size(); ++i)
    out.cpts[bn.nodes[i]] = std::vector<Label>(truth[i].begin(), truth[i].end());
  return out;
}

/// One complete instantiation by ancestral sampling.
inline std::vector<std::uint8_t> sample_instantiation(const NetworkIndex& idx, const CptTable& truth, Rng& rng) {
  std::vector<std::uint8_t> values(idx.parents.size(), 0);
  for (std::size_t node : idx.order) values[node] = bernoulli(rng, truth[node][idx.row_of(node, values)]) ? 1 : 0;
  return values;
}

/// Counts of each node's value per CPT row over `n_ins` sampled
/// instantiations. Rows whose parent configuration never occurs stay (0, 0).
inline std::vector<std::vector<ObservationCounts>> sample_observation_counts(const NetworkIndex& idx,
                                                                              const CptTable& truth,
                                                                              std::size_t n_ins, Rng& rng) {
  std::vector<std::vector<ObservationCounts>> counts;
  for (const auto& rows : truth) counts.emplace_back(rows.size());
  for (std::size_t k = 0; k < n_ins; ++k) {
    const auto values = sample_instantiation(idx, truth, rng);
    for (std::size_t node = 0; node < values.size(); ++node) {
      auto& c = counts[node][idx.row_of(node, values)];
      ++(values[node] ? c.n_pos : c.n_neg);
    }
  }
  return counts;
}

/// Copy of `bn` labelled with opinions learned from `n_ins` instantiations.
inline BayesNetwork sample_observations(const BayesNetwork& bn, const CptTable& truth, std::size_t n_ins, Rng& rng,
                                        const PriorConfig& prior = {}) {
  if (n_ins == 0) throw std::invalid_argument("n_ins must be at least 1");
  const NetworkIndex idx = index_network(bn);
  const auto counts = sample_observation_counts(idx, truth, n_ins, rng);
  BayesNetwork out = bn;
  out.cpts.clear();
  for (std::size_t i = 0; i < bn.nodes.size(); ++i) {
    std::vector<Label> rows;
    for (const auto& c : counts[i]) rows.push_back(opinion_from_counts(c, prior));
    out.cpts[bn.nodes[i]] = std::move(rows);
  }
  return out;
}

/// Exact P(node = true | evidence) for every node by summing the joint
/// table. Evidence maps node index to value. Throws if the evidence has
/// probability zero.
inline std::vector<double> exact_posteriors(const NetworkIndex& idx, const CptTable& truth,
                                            const std::map<std::size_t, bool>& evidence) {
  const std::size_t n = idx.parents.size();
  if (n > 24) throw std::invalid_argument("network too large for joint-table inference");
  std::vector<double> mass(n, 0.0);
  double total = 0.0;
  std::vector<std::uint8_t> values(n);
  for (std::uint64_t state = 0; state < (std::uint64_t{1} << n); ++state) {
    bool consistent = true;
    for (std::size_t i = 0; i < n; ++i) values[i] = (state >> i) & 1u;
    for (const auto& [node, value] : evidence)
      if (static_cast<bool>(values[node]) != value) {
        consistent = false;
        break;
      }
    if (!consistent) continue;
    double p = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = truth[i][idx.row_of(i, values)];
      p *= values[i] ? t : 1.0 - t;
    }
    total += p;
    for (std::size_t i = 0; i < n; ++i)
      if (values[i]) mass[i] += p;
  }
  if (total <= 0.0) throw UndefinedResult("evidence has probability zero");
  for (auto& m : mass) m /= total;
  return mass;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json network_to_json(const BayesNetwork& bn) {
  using nlohmann::json;
  json j;
  j["name"] = bn.name;
  j["nodes"] = bn.nodes;
  json parents = json::object();
  for (const auto& node : bn.nodes) parents[node] = bn.parents_of(node);
  j["parents"] = parents;
  json roles = json::object();
  for (const auto& node : bn.nodes) {
    const NodeRole r = bn.role_of(node);
    if (r != NodeRole::latent) roles[node] = r == NodeRole::observed ? "observed" : "queried";
  }
  j["roles"] = roles;
  if (!bn.cpts.empty()) {
    json cpts = json::object();
    for (const auto& [node, rows] : bn.cpts) {
      json arr = json::array();
      for (const auto& label : rows) {
        if (const auto* p = std::get_if<double>(&label)) arr.push_back(*p);
        else {
          const auto& op = std::get<Opinion>(label);
          arr.push_back({op.belief(), op.disbelief(), op.uncertainty(), op.base_rate()});
        }
      }
      cpts[node] = arr;
    }
    j["cpts"] = cpts;
  }
  if (!bn.evidence.empty()) j["evidence"] = bn.evidence;
  return j;
}

inline BayesNetwork network_from_json(const nlohmann::json& j) {
  BayesNetwork bn;
  try {
    bn.name = j.value("name", std::string{});
    bn.nodes = j.at("nodes").get<std::vector<std::string>>();
    if (j.contains("parents"))
      for (const auto& [node, ps] : j.at("parents").items()) bn.parents[node] = ps.get<std::vector<std::string>>();
    if (j.contains("roles"))
      for (const auto& [node, r] : j.at("roles").items()) {
        const auto role = r.get<std::string>();
        if (role == "observed") bn.roles[node] = NodeRole::observed;
        else if (role == "queried") bn.roles[node] = NodeRole::queried;
        else if (role != "latent") throw std::invalid_argument("unknown role '" + role + "' for node '" + node + "'");
      }
    if (j.contains("cpts"))
      for (const auto& [node, rows] : j.at("cpts").items()) {
        std::vector<Label> labels;
        for (const auto& row : rows) {
          if (row.is_number()) {
            const double p = row.get<double>();
            if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability out of range in CPT of '" + node + "'");
            labels.emplace_back(p);
          } else {
            const auto v = row.get<std::vector<double>>();
            if (v.size() != 4) throw std::invalid_argument("opinion rows need four numbers [b, d, u, a]");
            labels.emplace_back(Opinion(v[0], v[1], v[2], v[3]));
          }
        }
        bn.cpts[node] = std::move(labels);
      }
    if (j.contains("evidence"))
      for (const auto& [node, v] : j.at("evidence").items()) bn.evidence[node] = v.get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed network: ") + e.what());
  }
  index_network(bn);
  return bn;
}

inline BayesNetwork parse_network(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
  }
  return network_from_json(j);
}

inline BayesNetwork load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_network(buf.str());
}

}  // namespace aprob
