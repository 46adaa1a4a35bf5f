#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "happrs/alf.hpp"
#include "happrs/core/dense.hpp"
#include "happrs/params.hpp"
#include "happrs/problem.hpp"

namespace happrs {

/// Curvature constants of the proximal matrices
///   Hx = H^x + beta A^T A + ell I,   Hy = H^y + (beta + sigma) I.
/// eta1_* are strong-convexity floors, eta2_* norm caps.
struct SpectralBounds {
  double eta_x = 0.0;        // >= |H^x|
  double eta_y = 0.0;        // >= |H^y|
  double lambda_lo_x = 0.0;  // <= lambda_min(H^x)
  double lambda_lo_y = 0.0;  // <= lambda_min(H^y)
  double eta1_x = 0.0;       // lambda_lo_x + beta lambda_min(A^T A) + ell
  double eta1_y = 0.0;       // lambda_lo_y + beta + sigma
  double eta2_x = 0.0;       // eta_x + beta |A^T A| + ell
  double eta2_y = 0.0;       // eta_y + beta + sigma
};

enum class DualRegime { Ascent, Descent, Mixed };
std::string_view to_string(DualRegime regime);

/// Ascent iff r > 0 and s > 0, Descent iff r < 0 and s < 0, otherwise Mixed.
DualRegime classify_regime(double r, double s);

struct KktResidual {
  double stat_x = 0.0;     // |grad f(x) - A^T lambda|_inf
  double stat_y = 0.0;     // |grad g(y) + lambda|_inf
  double feas = 0.0;       // |Ax - y|_inf
  double composite = 0.0;  // |grad f(x) + A^T grad g(Ax)|_inf
  double total = 0.0;      // max(stat_x, stat_y, feas)
};

KktResidual kkt_residual(const CompositeProblem& p, const Iterate& w);

/// Bounds from explicit Hessian approximations. |H| by power iteration and
/// lambda_min by shifted power iteration (tolerance 1e-8); when the shifted
/// iteration does not converge, lambda_lo falls back to -|H|.
/// Throws ErrorKind::NonPositiveEta1 if either floor is not positive.
SpectralBounds spectral_bounds(const CompositeProblem& p, const SolverParams& params,
                               const Mat& h_x, const Mat& h_y);

/// Bounds valid over the whole run: taken from the problem's declared
/// curvature intervals, or from the Hessians at the origin when it declares none.
SpectralBounds uniform_spectral_bounds(const CompositeProblem& p, const SolverParams& params);

/// Lower bound on every accepted line-search step:
///   nu * min{1, c eta1_x / (L_f + beta |A^T A|), c eta1_y / (L_g + beta)},
/// c = 1/(1 + alpha) - rho. Throws UnknownLipschitz without L_f, L_g. When
/// c <= 0 the bound does not exist: 0 is returned under relaxed_alpha,
/// otherwise InvalidArgument is thrown.
double compute_gamma(const CompositeProblem& p, const SolverParams& params,
                     const SpectralBounds& bounds);

/// Per-iteration merit decrease coefficients (delta_x, delta_y).
std::pair<double, double> compute_deltas(const CompositeProblem& p, const SolverParams& params,
                                         const SpectralBounds& bounds, double gamma);

struct DiagnosticsReport {
  double gamma = 0.0;
  double delta_x = 0.0;
  double delta_y = 0.0;
  DualRegime regime = DualRegime::Mixed;
  bool margins_positive = false;  // delta_x > 0 and delta_y > 0
  SpectralBounds bounds;
  std::vector<std::string> violations;
  std::vector<std::string> warnings;
};

DiagnosticsReport diagnose(const CompositeProblem& p, const SolverParams& params,
                           const SpectralBounds& bounds);

enum class DualDirection { ALDD, ALDA };

/// Instantiates the two parameter recipes that make both merit margins
/// positive. rho, nu, alpha, beta and the termination controls come from
/// `partial`; for ALDD a partial s in [-1, 0) is kept, otherwise s = -1.
/// ell and sigma are chosen so the step floor saturates at nu, and every
/// strict lower bound is exceeded by a 10% margin.
SolverParams suggest_params(DualDirection direction, const CompositeProblem& p,
                            const SolverParams& partial);

}  // namespace happrs
