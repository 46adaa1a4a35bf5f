#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace happrs {

/// Scalars of the HAP-PRS-SQP iteration.
///
/// rho, nu: Armijo fraction and backtracking ratio, both in (0, 1).
/// alpha: hybrid acceleration factor; the theory needs alpha in (-1, 1/rho - 1),
///   relaxed_alpha admits any alpha > -1 and tags the run as unsupported.
/// beta: penalty. ell, sigma: proximal weights for the x and y subproblems.
/// r, s: dual step sizes of the two multiplier updates, r + s != 0.
struct SolverParams {
  double rho = 0.4;
  double nu = 0.6;
  double alpha = 0.0;
  double beta = 1.0;
  double ell = 5.0;
  double sigma = 10.0;
  double r = 0.1;
  double s = 1.0;
  std::size_t max_iter = 10000;
  double tol_step = 1e-4;
  std::size_t max_backtracks = 60;
  bool relaxed_alpha = false;

  /// True when alpha lies in the range the line-search analysis covers.
  bool alpha_supported() const { return alpha > -1.0 && alpha < 1.0 / rho - 1.0; }
};

/// Human-readable list of every violated constraint; empty when valid.
std::vector<std::string> validate_params(const SolverParams& params, bool relaxed);

/// Throws ErrorKind::InvalidArgument listing the violations, if any.
void ensure_valid(const SolverParams& params);

}  // namespace happrs
