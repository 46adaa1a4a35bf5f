#include "happrs/baseline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "happrs/core/error.hpp"
#include "happrs/core/linalg.hpp"

namespace happrs {

GdResult gradient_descent(const CompositeProblem& p, const Vec& x0, const GdParams& gd,
                          std::size_t snapshot_every) {
  require(x0.size() == p.n1(), ErrorKind::DimensionMismatch, "x0 does not match n1");
  if (gd.rule == GdParams::StepRule::Fixed) {
    require(gd.step > 0.0, ErrorKind::InvalidArgument, "fixed step must be positive");
  } else {
    require(gd.armijo_rho > 0.0 && gd.armijo_rho < 1.0 && gd.armijo_nu > 0.0 &&
                gd.armijo_nu < 1.0 && gd.step > 0.0,
            ErrorKind::InvalidArgument, "Armijo parameters must lie in (0, 1)");
  }

  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  GdResult res;
  res.x = x0;
  double value = composite_objective(p, res.x);
  Vec grad = composite_gradient(p, res.x);
  res.initial_objective = value;
  if (snapshot_every > 0) res.snapshots.push_back(res.x);

  for (std::size_t k = 0; k < gd.max_iter; ++k) {
    if (norm_inf(grad) <= gd.tol_grad) {
      res.status = SolveStatus::Converged;
      break;
    }
    GdStep step;
    step.k = k;
    double t = gd.step;
    Vec trial = res.x;
    axpy(-t, grad, trial);
    double trial_value = composite_objective(p, trial);
    if (gd.rule == GdParams::StepRule::Armijo) {
      const double g2 = dot(grad, grad);
      while (!(trial_value <= value - gd.armijo_rho * t * g2)) {
        if (++step.backtracks > gd.max_backtracks) {
          res.status = SolveStatus::LineSearchFailed;
          res.message = "Armijo backtracking exceeded max_backtracks";
          res.iterations = res.trace.size();
          return res;
        }
        t *= gd.armijo_nu;
        trial = res.x;
        axpy(-t, grad, trial);
        trial_value = composite_objective(p, trial);
      }
    }
    if (!std::isfinite(trial_value) || !all_finite(trial)) {
      res.status = SolveStatus::NumericalError;
      res.message = "gradient step produced a non-finite point";
      break;
    }
    res.x = std::move(trial);
    value = trial_value;
    grad = composite_gradient(p, res.x);
    step.objective = value;
    step.grad_inf = norm_inf(grad);
    step.step = t;
    step.elapsed = std::chrono::duration<double>(clock::now() - start).count();
    res.trace.push_back(step);
    if (snapshot_every > 0 && (k + 1) % snapshot_every == 0) res.snapshots.push_back(res.x);
  }
  if (res.status == SolveStatus::IterLimit && norm_inf(grad) <= gd.tol_grad) {
    res.status = SolveStatus::Converged;
  }
  res.iterations = res.trace.size();
  return res;
}

std::vector<double> relative_error_series(const std::vector<Vec>& snapshots, const Vec& x_final) {
  const double scale = std::max(1.0, norm2(x_final));
  std::vector<double> out;
  out.reserve(snapshots.size());
  for (const auto& x : snapshots) out.push_back(norm2(x - x_final) / scale);
  return out;
}

}  // namespace happrs
