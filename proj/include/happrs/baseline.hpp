#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "happrs/core/dense.hpp"
#include "happrs/problem.hpp"
#include "happrs/solver.hpp"

namespace happrs {

/// Steepest descent on F(x) = f(x) + g(Ax).
struct GdParams {
  enum class StepRule { Fixed, Armijo };
  StepRule rule = StepRule::Armijo;
  double step = 1.0;          // fixed step, and the first trial step under Armijo
  double armijo_rho = 1e-4;   // sufficient-decrease fraction
  double armijo_nu = 0.5;     // backtracking ratio
  std::size_t max_backtracks = 60;
  std::size_t max_iter = 10000;
  double tol_grad = 1e-6;     // stop when |grad F|_inf <= tol_grad
};

struct GdStep {
  std::size_t k = 0;
  double objective = 0.0;  // F after the step
  double grad_inf = 0.0;   // |grad F|_inf after the step
  double step = 0.0;
  std::size_t backtracks = 0;
  double elapsed = 0.0;
};

struct GdResult {
  Vec x;
  SolveStatus status = SolveStatus::IterLimit;
  std::vector<GdStep> trace;
  std::size_t iterations = 0;
  double initial_objective = 0.0;
  std::vector<Vec> snapshots;  // x_k every `snapshot_every` iterations, if requested
  std::string message;
};

GdResult gradient_descent(const CompositeProblem& p, const Vec& x0, const GdParams& gd,
                          std::size_t snapshot_every = 0);

/// |x_k - x_final| / max(1, |x_final|) for each snapshot.
std::vector<double> relative_error_series(const std::vector<Vec>& snapshots, const Vec& x_final);

}  // namespace happrs
