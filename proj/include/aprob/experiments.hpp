#pragma once

// Sparse-data experiments: draw ground truths, learn opinion labels from a
// handful of observations, infer the queries, and compare the inferred
// Beta marginals with the exact posteriors.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "aprob/bayes_net.hpp"
#include "aprob/incomplete_beta.hpp"
#include "aprob/inference.hpp"
#include "aprob/random.hpp"

namespace aprob {

/// 0, 0.05, ..., 1.
inline std::vector<double> default_gamma_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(i / 20.0);
  return grid;
}

struct ExperimentConfig {
  std::vector<std::size_t> n_ins{10, 50, 100};
  std::size_t n_ground_truths = 100;
  std::size_t n_repetitions = 10;
  std::uint64_t seed = 1;
  std::vector<SemiringKind> semirings{SemiringKind::sl, SemiringKind::beta};
  std::vector<double> gammas = default_gamma_grid();
  PriorConfig prior{};
  InferenceOptions inference{};
  DivisionVariance division = DivisionVariance::paper;
  /// Label facts with their exact ground-truth probabilities instead of
  /// learned opinions.
  bool point_mass_labels = false;

  void validate() const {
    if (n_ins.empty()) throw std::invalid_argument("at least one n_ins value is required");
    for (auto n : n_ins)
      if (n == 0) throw std::invalid_argument("n_ins must be at least 1");
    if (n_ground_truths == 0 || n_repetitions == 0)
      throw std::invalid_argument("ground-truth and repetition counts must be at least 1");
    if (semirings.empty()) throw std::invalid_argument("at least one semiring is required");
    for (std::size_t i = 0; i < gammas.size(); ++i) {
      if (!(gammas[i] >= 0.0 && gammas[i] <= 1.0)) throw std::invalid_argument("gamma values must lie in [0, 1]");
      if (i > 0 && gammas[i] < gammas[i - 1]) throw std::invalid_argument("gamma grid must be sorted ascending");
    }
    prior.validate();
  }
};

/// One inferred query marginal against its ground truth.
struct RunResult {
  double truth = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  BetaParams beta{1.0, 1.0};
};

struct RmseReport {
  double actual = 0.0;
  double predicted = 0.0;
};

struct CalibrationPoint {
  double gamma;
  double coverage;
};
using CalibrationCurve = std::vector<CalibrationPoint>;

struct MethodReport {
  std::string benchmark;
  SemiringKind semiring;
  std::size_t n_ins;
  RmseReport rmse;
  CalibrationCurve calibration;
  std::size_t failed_runs = 0;
  std::vector<RunResult> results;
};

inline RmseReport rmse(const std::vector<RunResult>& results) {
  if (results.empty()) throw std::invalid_argument("rmse needs at least one result");
  double sq = 0.0, var = 0.0;
  for (const auto& r : results) {
    sq += (r.mean - r.truth) * (r.mean - r.truth);
    var += r.variance;
  }
  const double n = static_cast<double>(results.size());
  return {std::sqrt(sq / n), std::sqrt(var / n)};
}

/// Marginals this concentrated are treated as point masses.
inline constexpr double kDegenerateStrength = 1e9;

/// Fraction of results whose truth lies in the central gamma-interval of
/// the inferred Beta marginal.
inline CalibrationCurve calibration_curve(const std::vector<RunResult>& results, const std::vector<double>& gammas) {
  CalibrationCurve curve;
  for (double gamma : gammas) {
    if (gamma <= 0.0 || results.empty()) {
      curve.push_back({gamma, 0.0});
      continue;
    }
    std::size_t inside = 0;
    for (const auto& r : results) {
      double lo, hi;
      if (r.beta.strength() >= kDegenerateStrength) {
        lo = hi = r.mean;
      } else {
        lo = beta_quantile(r.beta, (1.0 - gamma) / 2.0);
        hi = beta_quantile(r.beta, (1.0 + gamma) / 2.0);
      }
      if (r.truth >= lo - 1e-9 && r.truth <= hi + 1e-9) ++inside;
    }
    curve.push_back({gamma, static_cast<double>(inside) / static_cast<double>(results.size())});
  }
  return curve;
}

// ---------------------------------------------------------------------------
// Benchmarks

/// One ground truth: the plan to evaluate, the exact query posteriors, and
/// whatever the benchmark needs to draw observations.
struct Trial {
  const QueryPlan* plan = nullptr;
  std::vector<double> truth;
  std::vector<double> fact_probabilities;  // canonical fact order
  CptTable cpts;
};

class Benchmark {
 public:
  virtual ~Benchmark() = default;
  virtual const std::string& name() const = 0;
  virtual Trial sample_trial(Rng& rng) = 0;
  /// Opinion labels in canonical fact order learned from n_ins observations.
  virtual std::vector<Label> observe(const Trial& trial, std::size_t n_ins, Rng& rng,
                                     const PriorConfig& prior) const = 0;
  /// Exact labels of the trial, in canonical fact order.
  virtual std::vector<Label> exact_labels(const Trial& trial) const = 0;
};

/// A program whose labelled facts receive independent uniform ground truths.
/// Each fact is observed n_ins times; queries and evidence are fixed.
class ProgramBenchmark : public Benchmark {
 public:
  ProgramBenchmark(std::string name, const Program& program, const InferenceOptions& options = {})
      : name_(std::move(name)), gp_(make_ground_program(program)) {
    if (gp_.queries.empty()) throw std::invalid_argument("benchmark program has no queries");
    plan_ = std::make_unique<QueryPlan>(gp_, gp_.queries, gp_.evidence, options);
  }

  const std::string& name() const override { return name_; }
  const GroundProgram& program() const { return gp_; }
  const QueryPlan& plan() const { return *plan_; }

  Trial sample_trial(Rng& rng) override {
    Trial t;
    t.plan = plan_.get();
    for (std::size_t f = 0; f < gp_.num_facts(); ++f) t.fact_probabilities.push_back(uniform01(rng));
    t.truth = plan_->evaluate(make_fact_labels(ProbSemiring{}, exact_labels(t)), ProbSemiring{});
    return t;
  }

  std::vector<Label> observe(const Trial& trial, std::size_t n_ins, Rng& rng,
                             const PriorConfig& prior) const override {
    std::vector<Label> labels;
    for (double p : trial.fact_probabilities) {
      ObservationCounts c;
      for (std::size_t k = 0; k < n_ins; ++k) ++(bernoulli(rng, p) ? c.n_pos : c.n_neg);
      labels.emplace_back(opinion_from_counts(c, prior));
    }
    return labels;
  }

  std::vector<Label> exact_labels(const Trial& trial) const override {
    return {trial.fact_probabilities.begin(), trial.fact_probabilities.end()};
  }

 private:
  std::string name_;
  GroundProgram gp_;
  std::unique_ptr<QueryPlan> plan_;
};

/// A network whose CPT rows receive uniform ground truths. Each trial also
/// samples one instantiation to fix the values of the observed nodes; the
/// truth is the exact posterior of each queried node given them. Labels are
/// learned from n_ins complete instantiations.
class NetworkBenchmark : public Benchmark {
 public:
  NetworkBenchmark(BayesNetwork bn, const InferenceOptions& options = {})
      : bn_(std::move(bn)), index_(index_network(bn_)), options_(options) {
    CptTable placeholder;
    for (const auto& node : bn_.nodes) placeholder.emplace_back(bn_.num_rows(node), 0.5);
    gp_ = make_ground_program(compile_bn(with_probabilities(bn_, placeholder)));
    for (std::size_t i = 0; i < bn_.nodes.size(); ++i) {
      switch (bn_.role_of(bn_.nodes[i])) {
        case NodeRole::queried: queried_.push_back(i); break;
        case NodeRole::observed: observed_.push_back(i); break;
        case NodeRole::latent: break;
      }
      for (std::size_t row = 0; row < bn_.num_rows(bn_.nodes[i]); ++row) {
        const AtomId atom = gp_.atom_index.at(cpt_fact_name(bn_, bn_.nodes[i], row));
        fact_row_.push_back({i, row, static_cast<std::size_t>(gp_.fact_of_atom[atom])});
      }
    }
    if (queried_.empty()) throw std::invalid_argument("network '" + bn_.name + "' has no queried nodes");
  }

  const std::string& name() const override { return bn_.name; }
  const BayesNetwork& network() const { return bn_; }
  const GroundProgram& program() const { return gp_; }

  Trial sample_trial(Rng& rng) override {
    Trial t;
    t.cpts = sample_ground_truth(bn_, rng);
    const auto values = sample_instantiation(index_, t.cpts, rng);
    std::map<std::size_t, bool> evidence;
    std::vector<bool> key;
    for (std::size_t i : observed_) {
      evidence[i] = values[i];
      key.push_back(values[i]);
    }
    const auto posterior = exact_posteriors(index_, t.cpts, evidence);
    for (std::size_t i : queried_) t.truth.push_back(posterior[i]);
    t.plan = &plan_for(key);
    return t;
  }

  std::vector<Label> observe(const Trial& trial, std::size_t n_ins, Rng& rng,
                             const PriorConfig& prior) const override {
    const auto counts = sample_observation_counts(index_, trial.cpts, n_ins, rng);
    std::vector<Label> labels(gp_.num_facts(), 0.0);
    for (const auto& fr : fact_row_) labels[fr.fact] = opinion_from_counts(counts[fr.node][fr.row], prior);
    return labels;
  }

  std::vector<Label> exact_labels(const Trial& trial) const override {
    std::vector<Label> labels(gp_.num_facts(), 0.0);
    for (const auto& fr : fact_row_) labels[fr.fact] = trial.cpts[fr.node][fr.row];
    return labels;
  }

  /// Plan for the given values of the observed nodes (in node order).
  const QueryPlan& plan_for(const std::vector<bool>& observed_values) {
    auto it = plans_.find(observed_values);
    if (it != plans_.end()) return *it->second;
    std::vector<AtomId> queries;
    for (std::size_t i : queried_) queries.push_back(gp_.atom_index.at(bn_.nodes[i]));
    std::vector<std::pair<AtomId, bool>> evidence;
    for (std::size_t k = 0; k < observed_.size(); ++k)
      evidence.push_back({gp_.atom_index.at(bn_.nodes[observed_[k]]), observed_values[k]});
    auto plan = std::make_unique<QueryPlan>(gp_, std::move(queries), std::move(evidence), options_);
    return *plans_.emplace(observed_values, std::move(plan)).first->second;
  }

 private:
  struct FactRow {
    std::size_t node, row, fact;
  };

  BayesNetwork bn_;
  NetworkIndex index_;
  InferenceOptions options_;
  GroundProgram gp_;
  std::vector<std::size_t> queried_, observed_;
  std::vector<FactRow> fact_row_;
  std::map<std::vector<bool>, std::unique_ptr<QueryPlan>> plans_;
};

// ---------------------------------------------------------------------------
// Driver

namespace detail {

template <Parametrisation S>
std::vector<RunResult> infer_run(const Trial& trial, const std::vector<Label>& labels, const S& semiring,
                                 const PriorConfig& prior) {
  const auto inferred = trial.plan->evaluate(make_fact_labels(semiring, labels), semiring);
  std::vector<RunResult> out;
  for (std::size_t q = 0; q < inferred.size(); ++q) {
    RunResult r;
    r.truth = trial.truth[q];
    if constexpr (std::is_same_v<typename S::value_type, double>) {
      r.mean = inferred[q];
      r.beta = {kMaxStrength * r.mean, kMaxStrength * (1.0 - r.mean)};
    } else {
      const auto mv = mean_variance(inferred[q], prior.prior_weight);
      r.mean = mv.mean;
      r.variance = mv.variance;
      r.beta = opinion_to_beta(inferred[q], prior.prior_weight);
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace detail

/// Runs every (n_ins, semiring) combination over the same ground truths and
/// observation draws. Runs whose inference is undefined are skipped and
/// counted. Reports are ordered by n_ins, then by semiring as configured.
inline std::vector<MethodReport> run_experiment(Benchmark& benchmark, const ExperimentConfig& config) {
  config.validate();
  std::vector<MethodReport> reports;
  for (std::size_t n : config.n_ins)
    for (SemiringKind kind : config.semirings) reports.push_back({benchmark.name(), kind, n, {}, {}, 0, {}});

  for (std::size_t gt = 0; gt < config.n_ground_truths; ++gt) {
    Rng truth_rng(derive_seed(config.seed, gt, 0));
    const Trial trial = benchmark.sample_trial(truth_rng);
    for (std::size_t rep = 0; rep < config.n_repetitions; ++rep) {
      for (std::size_t ni = 0; ni < config.n_ins.size(); ++ni) {
        Rng obs_rng(derive_seed(config.seed, gt, 1 + rep * config.n_ins.size() + ni));
        const auto labels = config.point_mass_labels
                                ? benchmark.exact_labels(trial)
                                : benchmark.observe(trial, config.n_ins[ni], obs_rng, config.prior);
        for (std::size_t si = 0; si < config.semirings.size(); ++si) {
          MethodReport& report = reports[ni * config.semirings.size() + si];
          try {
            std::vector<RunResult> results;
            switch (config.semirings[si]) {
              case SemiringKind::prob: results = detail::infer_run(trial, labels, ProbSemiring{}, config.prior); break;
              case SemiringKind::sl: results = detail::infer_run(trial, labels, SlSemiring{}, config.prior); break;
              case SemiringKind::beta:
                results = detail::infer_run(trial, labels, BetaSemiring{config.prior, nullptr, config.division},
                                            config.prior);
                break;
            }
            report.results.insert(report.results.end(), results.begin(), results.end());
          } catch (const std::domain_error&) {
            ++report.failed_runs;
          }
        }
      }
    }
  }
  for (auto& report : reports) {
    if (report.results.empty()) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      report.rmse = {nan, nan};
    } else {
      report.rmse = rmse(report.results);
    }
    report.calibration = calibration_curve(report.results, config.gammas);
  }
  return reports;
}

inline std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

inline void write_rmse_csv(std::ostream& out, const std::vector<MethodReport>& reports) {
  out << "benchmark,semiring,n_ins,actual,predicted,failed_runs\n";
  for (const auto& r : reports)
    out << r.benchmark << ',' << to_string(r.semiring) << ',' << r.n_ins << ',' << format_number(r.rmse.actual) << ','
        << format_number(r.rmse.predicted) << ',' << r.failed_runs << '\n';
}

inline void write_calibration_csv(std::ostream& out, const std::vector<MethodReport>& reports) {
  out << "benchmark,semiring,n_ins,gamma,coverage\n";
  for (const auto& r : reports)
    for (const auto& p : r.calibration)
      out << r.benchmark << ',' << to_string(r.semiring) << ',' << r.n_ins << ',' << format_number(p.gamma) << ','
          << format_number(p.coverage) << '\n';
}

}  // namespace aprob
