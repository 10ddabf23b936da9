// aprob: inference on algebraic programs, sparse-data experiments and
// fixture generation.
//
// Exit codes: 0 success, 1 unreadable or malformed program, 2 inference,
// configuration or I/O error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aprob/aprob.hpp"

namespace fs = std::filesystem;
using namespace aprob;

namespace {

constexpr int kExitMalformed = 1;
constexpr int kExitFailure = 2;

struct CommonOptions {
  std::string semiring = "prob";
  std::uint64_t seed = 1;
  std::size_t budget = 24;
  std::string strategy = "tree";
  std::string division = "paper";
};

struct InferOptions {
  std::string path;
};

struct ExperimentOptions {
  std::string benchmark = "net1";
  std::vector<std::size_t> n_ins{10, 50, 100};
  std::size_t ground_truths = 100;
  std::size_t reps = 10;
  std::string out_dir = ".";
  std::vector<std::string> semirings{"sl", "beta"};
};

struct FixtureOptions {
  std::string out_dir = "data";
};

bool read_file(const std::string& path, std::string& text) {
  std::ifstream in(path);
  if (!in) return false;
  std::stringstream buf;
  buf << in.rdbuf();
  text = buf.str();
  return true;
}

bool is_json_path(const std::string& path) { return fs::path(path).extension() == ".json"; }

void print_label(const std::string& name, double p) { std::printf("%s: %.12g\n", name.c_str(), p); }

void print_label(const std::string& name, const Opinion& op) {
  const auto mv = mean_variance(op);
  std::printf("%s: <%.6f, %.6f, %.6f, %.6f> mean=%.6f variance=%.6g\n", name.c_str(), op.belief(), op.disbelief(),
              op.uncertainty(), op.base_rate(), mv.mean, mv.variance);
}

int run_infer(const InferOptions& opts, const CommonOptions& common) {
  std::string text;
  if (!read_file(opts.path, text)) {
    std::cerr << "error: cannot read " << opts.path << '\n';
    return kExitMalformed;
  }
  Program program;
  GroundProgram gp;
  try {
    program = is_json_path(opts.path) ? compile_bn(parse_network(text)) : parse_program(text);
    gp = make_ground_program(program);
    ThreeValuedEvaluator check(gp);
  } catch (const std::exception& e) {
    std::cerr << "error: " << opts.path << ": " << e.what() << '\n';
    return kExitMalformed;
  }
  if (gp.queries.empty()) {
    std::cerr << "error: " << opts.path << ": program has no query directives\n";
    return kExitMalformed;
  }
  try {
    const InferenceOptions inference{parse_strategy(common.strategy), common.budget};
    const QueryPlan plan(gp, gp.queries, gp.evidence, inference);
    visit_semiring(
        parse_semiring_kind(common.semiring), PriorConfig{},
        [&](const auto& semiring) {
          const auto labels = plan.evaluate(semiring);
          for (std::size_t i = 0; i < labels.size(); ++i) print_label(gp.atom_names[gp.queries[i]], labels[i]);
        },
        parse_division_variance(common.division));
  } catch (const std::exception& e) {
    std::cerr << "error: inference failed: " << e.what() << '\n';
    return kExitFailure;
  }
  return 0;
}

std::unique_ptr<Benchmark> make_benchmark(const std::string& spec, const InferenceOptions& inference) {
  if (spec == "net1") return std::make_unique<NetworkBenchmark>(net1(), inference);
  if (spec == "net2") return std::make_unique<NetworkBenchmark>(net2(), inference);
  if (spec == "net3") return std::make_unique<NetworkBenchmark>(net3(), inference);
  if (spec == "smokers") return std::make_unique<ProgramBenchmark>("smokers", smokers_benchmark(), inference);
  if (is_json_path(spec)) {
    BayesNetwork bn = load_network(spec);
    if (bn.name.empty()) bn.name = fs::path(spec).stem().string();
    return std::make_unique<NetworkBenchmark>(std::move(bn), inference);
  }
  std::string text;
  if (!read_file(spec, text)) throw std::invalid_argument("unknown benchmark or unreadable file '" + spec + "'");
  return std::make_unique<ProgramBenchmark>(fs::path(spec).stem().string(), parse_program(text), inference);
}

int run_experiment_command(const ExperimentOptions& opts, const CommonOptions& common) {
  std::vector<MethodReport> reports;
  try {
    ExperimentConfig config;
    config.n_ins = opts.n_ins;
    config.n_ground_truths = opts.ground_truths;
    config.n_repetitions = opts.reps;
    config.seed = common.seed;
    config.semirings.clear();
    for (const auto& s : opts.semirings) config.semirings.push_back(parse_semiring_kind(s));
    config.inference = {parse_strategy(common.strategy), common.budget};
    config.division = parse_division_variance(common.division);
    config.validate();
    auto benchmark = make_benchmark(opts.benchmark, config.inference);
    reports = run_experiment(*benchmark, config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }

  std::error_code ec;
  fs::create_directories(opts.out_dir, ec);
  const fs::path dir(opts.out_dir);
  std::ofstream rmse_out(dir / "rmse.csv"), calibration_out(dir / "calibration.csv");
  if (!rmse_out || !calibration_out) {
    std::cerr << "error: cannot write results to " << opts.out_dir << '\n';
    return kExitFailure;
  }
  write_rmse_csv(rmse_out, reports);
  write_calibration_csv(calibration_out, reports);
  rmse_out.close();
  calibration_out.close();
  if (!rmse_out || !calibration_out) {
    std::cerr << "error: failed writing results to " << opts.out_dir << '\n';
    return kExitFailure;
  }

  std::printf("%-10s %-5s %6s %9s %9s %7s\n", "benchmark", "semi", "n_ins", "actual", "predicted", "failed");
  for (const auto& r : reports)
    std::printf("%-10s %-5s %6zu %9.4f %9.4f %7zu\n", r.benchmark.c_str(), std::string(to_string(r.semiring)).c_str(),
                r.n_ins, r.rmse.actual, r.rmse.predicted, r.failed_runs);
  return 0;
}

int run_gen_fixtures(const FixtureOptions& opts) {
  std::error_code ec;
  fs::create_directories(opts.out_dir, ec);
  const fs::path dir(opts.out_dir);
  auto write = [&](const std::string& file, const std::string& content) {
    std::ofstream out(dir / file, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) throw std::runtime_error("cannot write " + (dir / file).string());
  };
  try {
    for (const auto& bn : shipped_networks()) write(bn.name + ".json", network_to_json(bn).dump(2) + "\n");
    write("smokers.pl",
          "% Friends & Smokers: four persons, certain friendships, labels are placeholders.\n" +
              to_text(smokers_benchmark()));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Algebraic probabilistic logic programs with probability, subjective-logic and Beta labels"};
  app.require_subcommand(1);

  CommonOptions common;
  InferOptions infer;
  ExperimentOptions experiment;
  FixtureOptions fixtures;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", common.seed, "Master random seed")->capture_default_str();
    cmd->add_option("--budget", common.budget, "Maximum number of algebraic facts")->capture_default_str();
    cmd->add_option("--strategy", common.strategy, "Evaluation strategy: tree or enumerate")
        ->check(CLI::IsMember({"tree", "enumerate"}))
        ->capture_default_str();
    cmd->add_option("--division-variance", common.division,
                    "Beta conditioning variance: paper (with cross term) or delta (first-order delta method)")
        ->check(CLI::IsMember({"paper", "delta"}))
        ->capture_default_str();
  };

  auto* infer_cmd = app.add_subcommand("infer", "Print the (conditional) label of every query in a program");
  infer_cmd->add_option("program", infer.path, "Program file (.pl text, or .json network)")->required();
  infer_cmd->add_option("--semiring", common.semiring, "Label semiring: prob, sl or beta")
      ->check(CLI::IsMember({"prob", "sl", "beta"}))
      ->capture_default_str();
  add_common(infer_cmd);

  auto* exp_cmd = app.add_subcommand("experiment", "Run the sparse-observation experiment and write CSV results");
  exp_cmd->add_option("--benchmark", experiment.benchmark, "net1, net2, net3, smokers, or a .json/.pl file")
      ->capture_default_str();
  exp_cmd->add_option("--n-ins", experiment.n_ins, "Observed instantiations per run")->capture_default_str();
  exp_cmd->add_option("--ground-truths", experiment.ground_truths, "Number of sampled ground truths")
      ->capture_default_str();
  exp_cmd->add_option("--reps", experiment.reps, "Observation draws per ground truth")->capture_default_str();
  exp_cmd->add_option("--out-dir", experiment.out_dir, "Directory for rmse.csv and calibration.csv")
      ->capture_default_str();
  exp_cmd->add_option("--semiring", experiment.semirings, "Semirings to compare")
      ->check(CLI::IsMember({"prob", "sl", "beta"}))
      ->capture_default_str();
  add_common(exp_cmd);

  auto* fix_cmd = app.add_subcommand("gen-fixtures", "Write the shipped benchmark files");
  fix_cmd->add_option("--out-dir", fixtures.out_dir, "Target directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitFailure;
  }

  if (infer_cmd->parsed()) return run_infer(infer, common);
  if (exp_cmd->parsed()) return run_experiment_command(experiment, common);
  return run_gen_fixtures(fixtures);
}
