#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "happrs/baseline.hpp"
#include "happrs/diagnostics.hpp"
#include "happrs/io/config.hpp"
#include "happrs/problem.hpp"
#include "happrs/solver.hpp"

namespace happrs::io {

CompositeProblem build_problem(const ProblemSpec& spec, std::uint64_t seed);

struct ExperimentOutcome {
  SolveResult result;
  std::optional<GdResult> baseline;
  nlohmann::ordered_json summary;
};

/// Solves from w0 = 0 and returns the outcome without touching the disk.
ExperimentOutcome solve_experiment(const CompositeProblem& p, const ExperimentConfig& cfg);

/// Builds the problem, solves, and writes trace.csv and summary.json (plus
/// baseline_trace.csv and relative_error.csv when requested) to output_dir.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg);

struct SweepRow {
  double r = 0.0;
  double s = 0.0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  DualRegime regime = DualRegime::Mixed;
  std::size_t iter = 0;
  double tcpu_s = 0.0;
  double ofv = 0.0;
  double fea = 0.0;
  double kkt = 0.0;
  std::string status;
};

inline constexpr const char* kSweepHeader = "r,s,alpha,regime,iter,tcpu_s,ofv,fea,kkt,status";

/// One row per (alpha, (r, s)) in that nesting order. Row i uses seed
/// base.seed ^ i. Rows with invalid parameters get status "Rejected".
/// Writes row_<i>_trace.csv, row_<i>_summary.json and sweep.csv.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

std::string sweep_csv(const std::vector<SweepRow>& rows);

nlohmann::ordered_json diagnostics_to_json(const CompositeProblem& p, const SolverParams& params,
                                           const DiagnosticsReport& report);

}  // namespace happrs::io
