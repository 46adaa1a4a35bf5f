#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "happrs/alf.hpp"
#include "happrs/core/dense.hpp"
#include "happrs/core/linalg.hpp"
#include "happrs/params.hpp"
#include "happrs/problem.hpp"

namespace happrs {

enum class SolveStatus { Converged, IterLimit, LineSearchFailed, NumericalError };
std::string_view to_string(SolveStatus status);

/// One iteration of the trace. The first block of fields is what the trace
/// CSV carries; the rest backs the property checks.
struct StepRecord {
  std::size_t k = 0;
  double t_x = 1.0;
  double t_y = 1.0;
  double norm_dx = 0.0;
  double norm_dy = 0.0;
  double L_beta = 0.0;
  double L_hat = 0.0;
  double feas_inf = 0.0;
  double kkt_inf = 0.0;
  double ofv = 0.0;
  std::size_t backtracks_x = 0;
  std::size_t backtracks_y = 0;
  double elapsed = 0.0;  // seconds since the run started

  double ofv_split = 0.0;  // f(x) + g(y)
  double kkt_composite = 0.0;
  double gx_dot_dx = 0.0;  // grad_x L^T d^x at the start of the x step
  double dx_hnorm2 = 0.0;  // |d^x|^2 in the Hx norm
  double gy_dot_dy = 0.0;
  double dy_hnorm2 = 0.0;
  double step_rel = 0.0;  // |w_{k+1} - w_k|_inf / max(1, |w_k|_inf)
  double ell = 0.0;       // proximal weights in force for this iteration
  double sigma = 0.0;
};

struct SolveResult {
  Iterate final;
  SolveStatus status = SolveStatus::IterLimit;
  std::vector<StepRecord> trace;
  std::size_t iterations = 0;
  double initial_L_beta = 0.0;
  double initial_L_hat = 0.0;
  double merit_weight = 0.0;  // NaN when L_g is unknown
  bool exact_fixed_point = false;
  bool unsupported_by_theory = false;  // alpha outside the analysed range
  std::string message;
  std::vector<Vec> snapshots;  // x_0 and every `snapshot_every`-th x_k, when requested
};

/// H^x + beta A^T A + ell I.
Mat proximal_matrix_x(const CompositeProblem& p, const Mat& h_x, double beta, double ell);
/// H^y + (beta + sigma) I.
Mat proximal_matrix_y(const Mat& h_y, double beta, double sigma);

/// Hessian approximations, their proximal matrices and Cholesky factors.
/// ell and sigma start at the configured values and are doubled whenever a
/// proximal matrix fails to factor; they never decrease within a run.
class ProximalModel {
 public:
  ProximalModel(const CompositeProblem& p, const SolverParams& params, Mat h_x, Mat h_y);

  /// Replaces the Hessian approximations, refactoring only what changed.
  void refresh(const CompositeProblem& p, Mat h_x, Mat h_y);

  const Mat& h_x() const noexcept { return h_x_; }
  const Mat& h_y() const noexcept { return h_y_; }
  const Mat& hcal_x() const noexcept { return hcal_x_; }
  const Mat& hcal_y() const noexcept { return hcal_y_; }
  const Cholesky& factor_x() const noexcept { return *factor_x_; }
  const Cholesky& factor_y() const noexcept { return *factor_y_; }
  double ell() const noexcept { return ell_; }
  double sigma() const noexcept { return sigma_; }
  std::size_t factorizations() const noexcept { return factorizations_; }

 private:
  void rebuild_x(const CompositeProblem& p);
  void rebuild_y();

  double beta_;
  double ell_;
  double sigma_;
  Mat beta_ata_;
  Mat h_x_, h_y_;
  Mat hcal_x_, hcal_y_;
  std::optional<Cholesky> factor_x_, factor_y_;
  std::size_t factorizations_ = 0;
};

/// grad_x L_beta(w): grad f(x) - A^T (lambda - beta (Ax - y)).
Vec x_model_gradient(const CompositeProblem& p, const Iterate& w, double beta);

/// grad_y L_beta(x_next, y, lambda_half): grad g(y) + lambda_half - beta (A x_next - y).
Vec y_model_gradient(const CompositeProblem& p, const Vec& x_next, const Vec& y,
                     const Vec& lambda_half, double beta);

/// Minimizer of the proximal quadratic model in x:
/// x_k - Hx^{-1} grad_x L_beta(w_k). Throws ProximalNotPD if Hx does not factor.
Vec solve_x_subproblem(const CompositeProblem& p, const Iterate& w, const Mat& h_x,
                       const SolverParams& params);

/// Minimizer of the proximal quadratic model in y at (x_next, y_k, lambda_half).
Vec solve_y_subproblem(const CompositeProblem& p, const Vec& x_next, const Vec& y,
                       const Vec& lambda_half, const Mat& h_y, const SolverParams& params);

struct Acceleration {
  Vec bar;  // tilde + alpha (tilde - current)
  Vec d;    // bar - current = (1 + alpha)(tilde - current)
};

Acceleration hybrid_accelerate(const Vec& tilde, const Vec& current, double alpha);

enum class Block { X, Y };

struct LineSearchResult {
  double t = 1.0;
  std::size_t backtracks = 0;
};

/// Backtracking search t = nu^i for the smallest i >= 0 with
///   L_beta(point + t d) <= L_beta(point) - rho t |d|^2_H.
/// Block X moves x in (x_k, y_k, lambda_k); block Y moves y in
/// (x_{k+1}, y_k, lambda_{k+1/2}). Comparisons allow a roundoff slack of
/// 64 eps (1 + |L_beta(point)|). Throws LineSearchFailed after max_backtracks.
LineSearchResult line_search(Block block, const CompositeProblem& p, const Iterate& point,
                             const Vec& d, const Mat& hcal, const SolverParams& params);

/// Same, with |d|^2_H supplied by the caller.
LineSearchResult line_search(Block block, const CompositeProblem& p, const Iterate& point,
                             const Vec& d, double d_hnorm2, const SolverParams& params);

/// lambda - stepsize * beta * residual.
Vec dual_update(const Vec& lambda, double stepsize, double beta, const Vec& residual);

/// One sweep: x step, first dual update, y step, second dual update, then
/// the Hessian refresh of `model` at the new point. eta_y bounds |H^y| for
/// the merit value in the record (NaN leaves L_hat as NaN). Throws
/// LineSearchFailed or NumericalError.
std::pair<AugmentedIterate, StepRecord> iterate_once(
    const CompositeProblem& p, const AugmentedIterate& state, ProximalModel& model,
    const SolverParams& params, double eta_y = std::numeric_limits<double>::quiet_NaN());

/// Runs until the relative sup-norm step falls to tol_step or max_iter is
/// reached. Parameter violations throw InvalidArgument; failures during the
/// iteration are reported through the status.
SolveResult run(const CompositeProblem& p, const Iterate& w0, const SolverParams& params,
                std::size_t snapshot_every = 0);

}  // namespace happrs
