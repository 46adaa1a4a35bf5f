#include "happrs/io/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "happrs/core/error.hpp"
#include "happrs/core/linalg.hpp"
#include "happrs/core/rng.hpp"
#include "happrs/io/problem_io.hpp"
#include "happrs/io/trace_io.hpp"

namespace happrs::io {

using nlohmann::ordered_json;

namespace {

// JSON has no NaN or infinity; such values are written as null.
ordered_json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

void write_json(const ordered_json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

void write_relative_errors(const ExperimentOutcome& o, std::size_t every,
                           const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out << "method,k,rel_error\n";
  auto emit = [&](const char* method, const std::vector<Vec>& snaps, const Vec& x_final) {
    const auto errs = relative_error_series(snaps, x_final);
    for (std::size_t i = 0; i < errs.size(); ++i)
      out << method << ',' << i * every << ',' << format_double(errs[i]) << '\n';
  };
  emit("hap", o.result.snapshots, o.result.final.x);
  if (o.baseline) emit("gd", o.baseline->snapshots, o.baseline->x);
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

std::string problem_kind(ProblemSpec::Kind k) {
  switch (k) {
    case ProblemSpec::Kind::Quadratic: return "quadratic";
    case ProblemSpec::Kind::Classification: return "classification";
    case ProblemSpec::Kind::HuberLasso: return "huber_lasso";
  }
  return "unknown";
}

}  // namespace

CompositeProblem build_problem(const ProblemSpec& spec, std::uint64_t seed) {
  if (!spec.file.empty()) {
    auto p = load_problem(spec.file);
    const bool matches =
        (spec.kind == ProblemSpec::Kind::Quadratic && std::holds_alternative<QuadraticData>(p.data())) ||
        (spec.kind == ProblemSpec::Kind::Classification &&
         std::holds_alternative<ClassificationData>(p.data())) ||
        (spec.kind == ProblemSpec::Kind::HuberLasso && std::holds_alternative<LassoData>(p.data()));
    if (!matches)
      throw Error(ErrorKind::Config, spec.file.string() + " does not hold a " +
                                         problem_kind(spec.kind) + " instance");
    return p;
  }
  Rng rng(seed);
  try {
    switch (spec.kind) {
      case ProblemSpec::Kind::Classification:
        return make_classification(spec.n, spec.t, spec.mu, rng);
      case ProblemSpec::Kind::HuberLasso:
        return make_huber_lasso(spec.m, spec.n, spec.density, spec.tau, spec.mu, rng);
      case ProblemSpec::Kind::Quadratic:
        break;
    }
  } catch (const Error& e) {
    throw Error(ErrorKind::Config, std::string("problem: ") + e.what());
  }
  throw Error(ErrorKind::Config, "problem: quadratic problems require a file");
}

ExperimentOutcome solve_experiment(const CompositeProblem& p, const ExperimentConfig& cfg) {
  ExperimentOutcome o;
  const auto start = std::chrono::steady_clock::now();
  o.result = run(p, Iterate::zeros(p), cfg.params, cfg.snapshot_every);
  const double tcpu = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto kkt = kkt_residual(p, o.result.final);

  auto& s = o.summary;
  s["schema"] = kSchemaVersion;
  s["problem"] = p.name();
  s["n1"] = p.n1();
  s["n2"] = p.n2();
  s["seed"] = cfg.seed;
  s["params"] = params_to_json(cfg.params);
  s["status"] = std::string(to_string(o.result.status));
  s["regime"] = std::string(to_string(classify_regime(cfg.params.r, cfg.params.s)));
  s["iter"] = o.result.iterations;
  s["tcpu_s"] = tcpu;
  s["ofv"] = num(composite_objective(p, o.result.final.x));
  s["ofv_split"] = num(p.eval_f(o.result.final.x) + p.eval_g(o.result.final.y));
  s["fea"] = num(kkt.feas);
  s["kkt"] = num(kkt.total);
  s["kkt_composite"] = num(kkt.composite);
  s["exact_fixed_point"] = o.result.exact_fixed_point;
  s["unsupported_by_theory"] = o.result.unsupported_by_theory;
  if (!o.result.trace.empty()) {
    s["ell_final"] = o.result.trace.back().ell;
    s["sigma_final"] = o.result.trace.back().sigma;
  }
  if (!o.result.message.empty()) s["message"] = o.result.message;

  if (cfg.baseline) {
    GdParams gd = cfg.baseline_params;
    gd.max_iter = std::max<std::size_t>(1, o.result.iterations);
    o.baseline = gradient_descent(p, Vec(p.n1()), gd, cfg.snapshot_every);
    ordered_json b;
    b["method"] = "gradient_descent";
    b["rule"] = gd.rule == GdParams::StepRule::Armijo ? "armijo" : "fixed";
    b["status"] = std::string(to_string(o.baseline->status));
    b["iter"] = o.baseline->iterations;
    b["iteration_budget"] = gd.max_iter;
    b["ofv"] = num(composite_objective(p, o.baseline->x));
    b["grad_inf"] = num(norm_inf(composite_gradient(p, o.baseline->x)));
    if (!o.baseline->message.empty()) b["message"] = o.baseline->message;
    s["baseline"] = b;
  }
  if (cfg.snapshot_every > 0) {
    s["relative_error"] = "|x_k - x_final|_2 / max(1, |x_final|_2), x_final per method";
  }
  return o;
}

ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
  const auto p = build_problem(cfg.problem, cfg.seed);
  auto o = solve_experiment(p, cfg);
  std::filesystem::create_directories(cfg.output_dir);
  write_trace(o.result.trace, cfg.output_dir / "trace.csv");
  if (o.baseline) write_baseline_trace(o.baseline->trace, cfg.output_dir / "baseline_trace.csv");
  if (cfg.snapshot_every > 0)
    write_relative_errors(o, cfg.snapshot_every, cfg.output_dir / "relative_error.csv");
  write_json(o.summary, cfg.output_dir / "summary.json");
  return o;
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  require(!cfg.rs_grid.empty() && !cfg.alpha_grid.empty(), ErrorKind::Config,
          "sweep grid is empty");
  struct Job {
    ExperimentConfig exp;
    SweepRow row;
  };
  std::vector<Job> jobs;
  for (double alpha : cfg.alpha_grid) {
    for (auto [r, s] : cfg.rs_grid) {
      Job job{cfg.base, {}};
      job.exp.params.r = r;
      job.exp.params.s = s;
      job.exp.params.alpha = alpha;
      job.exp.seed = cfg.base.seed ^ static_cast<std::uint64_t>(jobs.size());
      job.row.r = r;
      job.row.s = s;
      job.row.alpha = alpha;
      job.row.seed = job.exp.seed;
      job.row.regime = classify_regime(r, s);
      jobs.push_back(std::move(job));
    }
  }

  std::filesystem::create_directories(cfg.base.output_dir);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      auto& job = jobs[i];
      auto& row = job.row;
      const std::string prefix = "row_" + std::to_string(i);
      ordered_json summary;
      const auto violations = validate_params(job.exp.params, job.exp.params.relaxed_alpha);
      if (!violations.empty()) {
        row.status = "Rejected";
        std::string msg;
        for (const auto& v : violations) msg += (msg.empty() ? "" : "; ") + v;
        summary["schema"] = kSchemaVersion;
        summary["status"] = row.status;
        summary["message"] = msg;
        summary["params"] = params_to_json(job.exp.params);
      } else {
        try {
          const auto p = build_problem(job.exp.problem, job.exp.seed);
          auto o = solve_experiment(p, job.exp);
          write_trace(o.result.trace, cfg.base.output_dir / (prefix + "_trace.csv"));
          row.status = std::string(to_string(o.result.status));
          row.iter = o.result.iterations;
          row.tcpu_s = o.summary["tcpu_s"].get<double>();
          const auto kkt = kkt_residual(p, o.result.final);
          row.ofv = composite_objective(p, o.result.final.x);
          row.fea = kkt.feas;
          row.kkt = kkt.total;
          summary = std::move(o.summary);
        } catch (const std::exception& e) {
          row.status = "Error";
          summary["schema"] = kSchemaVersion;
          summary["status"] = row.status;
          summary["message"] = e.what();
        }
      }
      if (row.status == "Rejected" || row.status == "Error") {
        row.ofv = row.fea = row.kkt = std::numeric_limits<double>::quiet_NaN();
      }
      summary["row"] = i;
      write_json(summary, cfg.base.output_dir / (prefix + "_summary.json"));
    }
  };

  std::size_t threads = cfg.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, jobs.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<SweepRow> rows;
  rows.reserve(jobs.size());
  for (auto& job : jobs) rows.push_back(std::move(job.row));
  std::ofstream out(cfg.base.output_dir / "sweep.csv", std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write sweep.csv");
  out << sweep_csv(rows);
  if (!out) throw Error(ErrorKind::Io, "failed writing sweep.csv");
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << kSweepHeader << '\n';
  for (const auto& r : rows) {
    out << format_double(r.r) << ',' << format_double(r.s) << ',' << format_double(r.alpha) << ','
        << to_string(r.regime) << ',' << r.iter << ',' << format_double(r.tcpu_s) << ','
        << format_double(r.ofv) << ',' << format_double(r.fea) << ',' << format_double(r.kkt)
        << ',' << r.status << '\n';
  }
  return out.str();
}

ordered_json diagnostics_to_json(const CompositeProblem& p, const SolverParams& params,
                                 const DiagnosticsReport& report) {
  ordered_json j;
  j["problem"] = p.name();
  j["n1"] = p.n1();
  j["n2"] = p.n2();
  j["lipschitz_f"] = p.lipschitz_f() ? num(*p.lipschitz_f()) : ordered_json(nullptr);
  j["lipschitz_g"] = p.lipschitz_g() ? num(*p.lipschitz_g()) : ordered_json(nullptr);
  j["norm_ata"] = num(p.norm_ata());
  j["min_eig_ata"] = num(p.min_eig_ata());
  j["params"] = params_to_json(params);
  j["gamma"] = num(report.gamma);
  j["delta_x"] = num(report.delta_x);
  j["delta_y"] = num(report.delta_y);
  j["regime"] = std::string(to_string(report.regime));
  j["margins_positive"] = report.margins_positive;
  const auto& b = report.bounds;
  j["bounds"] = {{"eta_x", num(b.eta_x)},       {"eta_y", num(b.eta_y)},
                 {"lambda_lo_x", num(b.lambda_lo_x)}, {"lambda_lo_y", num(b.lambda_lo_y)},
                 {"eta1_x", num(b.eta1_x)},     {"eta1_y", num(b.eta1_y)},
                 {"eta2_x", num(b.eta2_x)},     {"eta2_y", num(b.eta2_y)}};
  j["violations"] = report.violations;
  j["warnings"] = report.warnings;
  return j;
}

}  // namespace happrs::io
