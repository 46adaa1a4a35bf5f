#include "happrs/io/config.hpp"

#include <fstream>

#include "happrs/core/error.hpp"
#include "json_util.hpp"

namespace happrs::io {

using nlohmann::json;
using nlohmann::ordered_json;
using namespace detail;

namespace {

std::size_t as_size(const json& v, const std::string& what) {
  return static_cast<std::size_t>(as_u64(v, what));
}

ProblemSpec parse_problem(const json& j, const std::filesystem::path& base_dir) {
  const std::string where = "problem";
  expect_object(j, where);
  const auto type = as_string(field(j, where, "type"), "problem.type");
  ProblemSpec spec;
  if (type == "quadratic") {
    reject_unknown(j, where, {"type", "file"});
    spec.kind = ProblemSpec::Kind::Quadratic;
  } else if (type == "classification") {
    reject_unknown(j, where, {"type", "file", "n", "T", "mu"});
    spec.kind = ProblemSpec::Kind::Classification;
    if (j.contains("n")) spec.n = as_size(j["n"], "problem.n");
    if (j.contains("T")) spec.t = as_size(j["T"], "problem.T");
    if (j.contains("mu")) spec.mu = as_double(j["mu"], "problem.mu");
  } else if (type == "huber_lasso") {
    reject_unknown(j, where, {"type", "file", "m", "n", "density", "tau", "mu"});
    spec.kind = ProblemSpec::Kind::HuberLasso;
    spec.n = 512;
    spec.mu = 0.1;
    if (j.contains("m")) spec.m = as_size(j["m"], "problem.m");
    if (j.contains("n")) spec.n = as_size(j["n"], "problem.n");
    if (j.contains("density")) spec.density = as_double(j["density"], "problem.density");
    if (j.contains("tau")) spec.tau = as_double(j["tau"], "problem.tau");
    if (j.contains("mu")) spec.mu = as_double(j["mu"], "problem.mu");
  } else {
    config_error("problem.type: unknown type \"" + type + "\"");
  }
  if (j.contains("file")) {
    std::filesystem::path f = as_string(j["file"], "problem.file");
    spec.file = f.is_absolute() ? f : base_dir / f;
  } else if (spec.kind == ProblemSpec::Kind::Quadratic) {
    config_error("problem: quadratic problems require \"file\"");
  }
  return spec;
}

SolverParams parse_params(const json& j) {
  const std::string where = "params";
  expect_object(j, where);
  reject_unknown(j, where,
                 {"rho", "nu", "alpha", "beta", "ell", "sigma", "r", "s", "max_iter", "tol_step",
                  "max_backtracks"});
  SolverParams p;
  auto num = [&](const char* key, double& out) {
    if (j.contains(key)) out = as_double(j[key], std::string("params.") + key);
  };
  num("rho", p.rho);
  num("nu", p.nu);
  num("alpha", p.alpha);
  num("beta", p.beta);
  num("ell", p.ell);
  num("sigma", p.sigma);
  num("r", p.r);
  num("s", p.s);
  num("tol_step", p.tol_step);
  if (j.contains("max_iter")) p.max_iter = as_size(j["max_iter"], "params.max_iter");
  if (j.contains("max_backtracks"))
    p.max_backtracks = as_size(j["max_backtracks"], "params.max_backtracks");
  return p;
}

GdParams parse_baseline_params(const json& j) {
  const std::string where = "baseline_params";
  expect_object(j, where);
  reject_unknown(j, where, {"rule", "step", "rho", "nu", "max_backtracks", "max_iter", "tol_grad"});
  GdParams g;
  if (j.contains("rule")) {
    const auto rule = as_string(j["rule"], "baseline_params.rule");
    if (rule == "fixed")
      g.rule = GdParams::StepRule::Fixed;
    else if (rule == "armijo")
      g.rule = GdParams::StepRule::Armijo;
    else
      config_error("baseline_params.rule: expected \"fixed\" or \"armijo\"");
  }
  if (j.contains("step")) g.step = as_double(j["step"], "baseline_params.step");
  if (j.contains("rho")) g.armijo_rho = as_double(j["rho"], "baseline_params.rho");
  if (j.contains("nu")) g.armijo_nu = as_double(j["nu"], "baseline_params.nu");
  if (j.contains("tol_grad")) g.tol_grad = as_double(j["tol_grad"], "baseline_params.tol_grad");
  if (j.contains("max_backtracks"))
    g.max_backtracks = as_size(j["max_backtracks"], "baseline_params.max_backtracks");
  if (j.contains("max_iter")) g.max_iter = as_size(j["max_iter"], "baseline_params.max_iter");
  if (!(g.step > 0.0)) config_error("baseline_params.step must be positive");
  if (!(g.armijo_rho > 0.0 && g.armijo_rho < 1.0)) config_error("baseline_params.rho not in (0, 1)");
  if (!(g.armijo_nu > 0.0 && g.armijo_nu < 1.0)) config_error("baseline_params.nu not in (0, 1)");
  return g;
}

void check_params(const SolverParams& p) {
  const auto violations = validate_params(p, p.relaxed_alpha);
  if (violations.empty()) return;
  std::string msg = "params:";
  for (const auto& v : violations) msg += " " + v + ";";
  config_error(msg);
}

ExperimentConfig parse_experiment_body(const json& j, const std::filesystem::path& base_dir,
                                       const std::string& where, bool validate) {
  expect_object(j, where);
  ExperimentConfig cfg;
  cfg.problem = parse_problem(field(j, where, "problem"), base_dir);
  if (j.contains("seed")) cfg.seed = as_u64(j["seed"], where + ".seed");
  if (j.contains("params")) cfg.params = parse_params(j["params"]);
  if (j.contains("relaxed_alpha"))
    cfg.params.relaxed_alpha = as_bool(j["relaxed_alpha"], where + ".relaxed_alpha");
  if (j.contains("output_dir")) {
    std::filesystem::path out = as_string(j["output_dir"], where + ".output_dir");
    cfg.output_dir = out.is_absolute() ? out : base_dir / out;
  } else {
    cfg.output_dir = base_dir / "out";
  }
  if (j.contains("baseline")) cfg.baseline = as_bool(j["baseline"], where + ".baseline");
  if (j.contains("baseline_params")) cfg.baseline_params = parse_baseline_params(j["baseline_params"]);
  if (j.contains("snapshot_every"))
    cfg.snapshot_every = as_size(j["snapshot_every"], where + ".snapshot_every");
  if (validate) check_params(cfg.params);
  return cfg;
}

}  // namespace

ExperimentConfig parse_experiment(const json& j, const std::filesystem::path& base_dir) {
  expect_object(j, "config");
  check_schema(j, "config", kSchemaVersion);
  reject_unknown(j, "config",
                 {"schema", "problem", "seed", "params", "relaxed_alpha", "output_dir", "baseline",
                  "baseline_params", "snapshot_every"});
  return parse_experiment_body(j, base_dir, "config", true);
}

SweepConfig parse_sweep(const json& j, const std::filesystem::path& base_dir) {
  expect_object(j, "sweep");
  check_schema(j, "sweep", kSchemaVersion);
  reject_unknown(j, "sweep", {"schema", "base", "rs_grid", "alpha_grid", "threads"});
  SweepConfig cfg;
  const auto& base = field(j, "sweep", "base");
  expect_object(base, "sweep.base");
  reject_unknown(base, "sweep.base",
                 {"problem", "seed", "params", "relaxed_alpha", "output_dir", "baseline",
                  "baseline_params", "snapshot_every"});
  // r, s and alpha are overridden per row, so validation happens per row.
  cfg.base = parse_experiment_body(base, base_dir, "sweep.base", false);

  const auto& grid = field(j, "sweep", "rs_grid");
  if (!grid.is_array() || grid.empty()) config_error("sweep.rs_grid: expected a nonempty array");
  for (const auto& pair : grid) {
    if (!pair.is_array() || pair.size() != 2)
      config_error("sweep.rs_grid: each entry must be an [r, s] pair");
    cfg.rs_grid.emplace_back(as_double(pair[0], "sweep.rs_grid"), as_double(pair[1], "sweep.rs_grid"));
  }
  if (j.contains("alpha_grid")) {
    const auto& ag = j["alpha_grid"];
    if (!ag.is_array() || ag.empty()) config_error("sweep.alpha_grid: expected a nonempty array");
    cfg.alpha_grid.clear();
    for (const auto& a : ag) cfg.alpha_grid.push_back(as_double(a, "sweep.alpha_grid"));
  } else {
    cfg.alpha_grid = {cfg.base.params.alpha};
  }
  if (j.contains("threads")) cfg.threads = as_size(j["threads"], "sweep.threads");
  return cfg;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    config_error(path.string() + ": " + e.what());
  }
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  return parse_experiment(read_json_file(path), path.parent_path());
}

SweepConfig load_sweep(const std::filesystem::path& path) {
  return parse_sweep(read_json_file(path), path.parent_path());
}

ordered_json params_to_json(const SolverParams& p) {
  ordered_json j;
  j["rho"] = p.rho;
  j["nu"] = p.nu;
  j["alpha"] = p.alpha;
  j["beta"] = p.beta;
  j["ell"] = p.ell;
  j["sigma"] = p.sigma;
  j["r"] = p.r;
  j["s"] = p.s;
  j["max_iter"] = p.max_iter;
  j["tol_step"] = p.tol_step;
  j["max_backtracks"] = p.max_backtracks;
  j["relaxed_alpha"] = p.relaxed_alpha;
  return j;
}

}  // namespace happrs::io
