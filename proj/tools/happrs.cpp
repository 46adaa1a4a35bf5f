#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "happrs/core/error.hpp"
#include "happrs/core/rng.hpp"
#include "happrs/diagnostics.hpp"
#include "happrs/io/config.hpp"
#include "happrs/io/experiment.hpp"
#include "happrs/io/problem_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitSolver = 2;

bool solver_failed(const std::string& status) {
  return status == "LineSearchFailed" || status == "NumericalError" || status == "Error";
}

int cmd_solve(const std::string& config) {
  const auto cfg = happrs::io::load_experiment(config);
  const auto o = happrs::io::run_experiment(cfg);
  std::cout << o.summary.dump(2) << '\n';
  return solver_failed(o.summary["status"].get<std::string>()) ? kExitSolver : kExitOk;
}

int cmd_sweep(const std::string& config) {
  const auto cfg = happrs::io::load_sweep(config);
  const auto rows = happrs::io::run_sweep(cfg);
  std::cout << happrs::io::sweep_csv(rows);
  for (const auto& r : rows)
    if (solver_failed(r.status)) return kExitSolver;
  return kExitOk;
}

int cmd_check_params(const std::string& config, const std::string& suggest) {
  auto cfg = happrs::io::load_experiment(config);
  const auto p = happrs::io::build_problem(cfg.problem, cfg.seed);
  if (suggest == "alda")
    cfg.params = happrs::suggest_params(happrs::DualDirection::ALDA, p, cfg.params);
  else if (suggest == "aldd")
    cfg.params = happrs::suggest_params(happrs::DualDirection::ALDD, p, cfg.params);
  const auto bounds = happrs::uniform_spectral_bounds(p, cfg.params);
  const auto report = happrs::diagnose(p, cfg.params, bounds);
  std::cout << happrs::io::diagnostics_to_json(p, cfg.params, report).dump(2) << '\n';
  return kExitOk;
}

struct GenOptions {
  std::string problem;
  std::uint64_t seed = 0;
  std::string out;
  std::size_t n = 100;
  std::size_t t = 100;
  std::size_t m = 128;
  std::size_t n1 = 5;
  std::size_t n2 = 5;
  double mu = 1e-3;
  double density = 0.5;
  double tau = 1e-3;
};

int cmd_gen_data(const GenOptions& g) {
  happrs::Rng rng(g.seed);
  std::optional<happrs::CompositeProblem> p;
  try {
    if (g.problem == "quadratic") {
      auto c_f = happrs::normal_sample(rng, g.n1);
      auto c_g = happrs::normal_sample(rng, g.n2);
      auto a = happrs::Mat::from_row_major(g.n2, g.n1, happrs::normal_sample(rng, g.n1 * g.n2).values());
      p = happrs::make_quadratic(std::move(c_f), std::move(c_g), std::move(a));
    } else if (g.problem == "classification") {
      p = happrs::make_classification(g.n, g.t, g.mu, rng);
    } else {
      p = happrs::make_huber_lasso(g.m, g.n, g.density, g.tau, g.mu, rng);
    }
  } catch (const happrs::Error& e) {
    throw happrs::Error(happrs::ErrorKind::Config, e.what());
  }
  happrs::io::save_problem(*p, g.out, g.seed);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HAP-PRS-SQP composite optimization solver"};
  app.require_subcommand(1);

  std::string config;
  auto* solve = app.add_subcommand("solve", "Run one experiment, write trace.csv and summary.json");
  solve->add_option("--config", config, "experiment config (JSON)")->required();

  auto* sweep = app.add_subcommand("sweep", "Run an (r, s, alpha) grid, write sweep.csv");
  sweep->add_option("--config", config, "sweep config (JSON)")->required();

  std::string suggest = "none";
  auto* check = app.add_subcommand("check-params", "Print theory constants for a config as JSON");
  check->add_option("--config", config, "experiment config (JSON)")->required();
  check->add_option("--suggest", suggest, "replace ell, sigma, r, s by a recipe first")
      ->check(CLI::IsMember({"none", "alda", "aldd"}));

  GenOptions gen;
  auto* gen_data = app.add_subcommand("gen-data", "Generate a problem instance as JSON");
  gen_data->add_option("--problem", gen.problem, "quadratic | classification | huber_lasso")
      ->required()
      ->check(CLI::IsMember({"quadratic", "classification", "huber_lasso"}));
  gen_data->add_option("--seed", gen.seed, "RNG seed")->required();
  gen_data->add_option("--out", gen.out, "output file")->required();
  gen_data->add_option("--n", gen.n, "classification: features; huber_lasso: columns");
  gen_data->add_option("--T", gen.t, "classification: samples");
  gen_data->add_option("--m", gen.m, "huber_lasso: rows");
  gen_data->add_option("--n1", gen.n1, "quadratic: dimension of x");
  gen_data->add_option("--n2", gen.n2, "quadratic: dimension of y");
  gen_data->add_option("--mu", gen.mu, "classification: penalty; huber_lasso: smoothing");
  gen_data->add_option("--density", gen.density, "huber_lasso: nonzero fraction of u");
  gen_data->add_option("--tau", gen.tau, "huber_lasso: l1 weight");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*solve) return cmd_solve(config);
    if (*sweep) return cmd_sweep(config);
    if (*check) return cmd_check_params(config, suggest);
    if (*gen_data) {
      if (gen.problem == "huber_lasso" && gen_data->count("--n") == 0) gen.n = 512;
      if (gen.problem == "huber_lasso" && gen_data->count("--mu") == 0) gen.mu = 0.1;
      return cmd_gen_data(gen);
    }
  } catch (const happrs::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (e.kind() == happrs::ErrorKind::Config || e.kind() == happrs::ErrorKind::InvalidArgument ||
        e.kind() == happrs::ErrorKind::Io)
      return kExitConfig;
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  }
  return kExitConfig;
}
