#include "happrs/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "happrs/core/error.hpp"
#include "happrs/diagnostics.hpp"

namespace happrs {
namespace {

constexpr int kMaxProximalDoublings = 200;

bool finite_iterate(const Iterate& w) {
  return all_finite(w.x) && all_finite(w.y) && all_finite(w.lambda);
}

double iterate_norm_inf(const Iterate& w) {
  return std::max({norm_inf(w.x), norm_inf(w.y), norm_inf(w.lambda)});
}

double step_norm_inf(const Iterate& a, const Iterate& b) {
  return std::max({norm_inf(a.x - b.x), norm_inf(a.y - b.y), norm_inf(a.lambda - b.lambda)});
}

double eta_y_bound(const CompositeProblem& p, const Mat& h_y) {
  if (const auto c = p.curvature_y()) return std::max(std::fabs(c->lo), std::fabs(c->hi));
  return largest_abs_eigenvalue(h_y).value;
}

}  // namespace

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::IterLimit: return "IterLimit";
    case SolveStatus::LineSearchFailed: return "LineSearchFailed";
    case SolveStatus::NumericalError: return "NumericalError";
  }
  return "NumericalError";
}

Mat proximal_matrix_x(const CompositeProblem& p, const Mat& h_x, double beta, double ell) {
  require(h_x.rows() == p.n1() && h_x.cols() == p.n1(), ErrorKind::DimensionMismatch,
          "H^x must be n1 x n1");
  Mat m = h_x + beta * p.ata();
  add_identity(m, ell);
  return m;
}

Mat proximal_matrix_y(const Mat& h_y, double beta, double sigma) {
  Mat m = h_y;
  add_identity(m, beta + sigma);
  return m;
}

ProximalModel::ProximalModel(const CompositeProblem& p, const SolverParams& params, Mat h_x,
                             Mat h_y)
    : beta_(params.beta),
      ell_(params.ell),
      sigma_(params.sigma),
      beta_ata_(params.beta * p.ata()),
      h_x_(std::move(h_x)),
      h_y_(std::move(h_y)) {
  require(h_x_.rows() == p.n1() && h_x_.cols() == p.n1(), ErrorKind::DimensionMismatch,
          "H^x must be n1 x n1");
  require(h_y_.rows() == p.n2() && h_y_.cols() == p.n2(), ErrorKind::DimensionMismatch,
          "H^y must be n2 x n2");
  rebuild_x(p);
  rebuild_y();
}

void ProximalModel::refresh(const CompositeProblem& p, Mat h_x, Mat h_y) {
  if (!(h_x == h_x_)) {
    h_x_ = std::move(h_x);
    rebuild_x(p);
  }
  if (!(h_y == h_y_)) {
    h_y_ = std::move(h_y);
    rebuild_y();
  }
}

void ProximalModel::rebuild_x(const CompositeProblem& p) {
  require(all_finite(h_x_), ErrorKind::NumericalError, "H^x has non-finite entries");
  (void)p;
  for (int i = 0; i <= kMaxProximalDoublings; ++i) {
    hcal_x_ = h_x_ + beta_ata_;
    add_identity(hcal_x_, ell_);
    ++factorizations_;
    factor_x_ = Cholesky::try_factor(hcal_x_);
    if (factor_x_) return;
    ell_ *= 2.0;
  }
  throw Error(ErrorKind::ProximalNotPD, "x proximal matrix stays indefinite after raising ell");
}

void ProximalModel::rebuild_y() {
  require(all_finite(h_y_), ErrorKind::NumericalError, "H^y has non-finite entries");
  for (int i = 0; i <= kMaxProximalDoublings; ++i) {
    hcal_y_ = proximal_matrix_y(h_y_, beta_, sigma_);
    ++factorizations_;
    factor_y_ = Cholesky::try_factor(hcal_y_);
    if (factor_y_) return;
    sigma_ *= 2.0;
  }
  throw Error(ErrorKind::ProximalNotPD, "y proximal matrix stays indefinite after raising sigma");
}

Vec x_model_gradient(const CompositeProblem& p, const Iterate& w, double beta) {
  Vec shifted = w.lambda;
  axpy(-beta, p.apply_a(w.x) - w.y, shifted);
  return p.grad_f(w.x) - p.apply_at(shifted);
}

Vec y_model_gradient(const CompositeProblem& p, const Vec& x_next, const Vec& y,
                     const Vec& lambda_half, double beta) {
  Vec g = p.grad_g(y) + lambda_half;
  axpy(-beta, p.apply_a(x_next) - y, g);
  return g;
}

Vec solve_x_subproblem(const CompositeProblem& p, const Iterate& w, const Mat& h_x,
                       const SolverParams& params) {
  const Mat hcal = proximal_matrix_x(p, h_x, params.beta, params.ell);
  const auto chol = Cholesky::try_factor(hcal);
  require(chol.has_value(), ErrorKind::ProximalNotPD, "H^x + beta A^T A + ell I is not PD");
  return w.x - chol->solve(x_model_gradient(p, w, params.beta));
}

Vec solve_y_subproblem(const CompositeProblem& p, const Vec& x_next, const Vec& y,
                       const Vec& lambda_half, const Mat& h_y, const SolverParams& params) {
  require(h_y.rows() == p.n2() && h_y.cols() == p.n2(), ErrorKind::DimensionMismatch,
          "H^y must be n2 x n2");
  const Mat hcal = proximal_matrix_y(h_y, params.beta, params.sigma);
  const auto chol = Cholesky::try_factor(hcal);
  require(chol.has_value(), ErrorKind::ProximalNotPD, "H^y + (beta + sigma) I is not PD");
  return y - chol->solve(y_model_gradient(p, x_next, y, lambda_half, params.beta));
}

Acceleration hybrid_accelerate(const Vec& tilde, const Vec& current, double alpha) {
  require(alpha > -1.0, ErrorKind::InvalidArgument, "acceleration needs alpha > -1");
  Vec step = tilde - current;
  Acceleration out{tilde, (1.0 + alpha) * step};
  axpy(alpha, step, out.bar);
  return out;
}

LineSearchResult line_search(Block block, const CompositeProblem& p, const Iterate& point,
                             const Vec& d, const Mat& hcal, const SolverParams& params) {
  return line_search(block, p, point, d, quad_form(hcal, d), params);
}

LineSearchResult line_search(Block block, const CompositeProblem& p, const Iterate& point,
                             const Vec& d, double d_hnorm2, const SolverParams& params) {
  const bool is_x = block == Block::X;
  require(d.size() == (is_x ? p.n1() : p.n2()), ErrorKind::DimensionMismatch,
          "search direction does not match the block");
  if (norm_inf(d) == 0.0) return {1.0, 0};

  const double beta = params.beta;
  const Vec r0 = p.apply_a(point.x) - point.y;
  // Moving the block by t d changes the residual Ax - y by t * dr.
  const Vec dr = is_x ? p.apply_a(d) : -d;
  const double lin = -dot(point.lambda, dr) + beta * dot(r0, dr);
  const double quad = 0.5 * beta * dot(dr, dr);
  const Vec& moving = is_x ? point.x : point.y;
  auto smooth = [&](const Vec& v) { return is_x ? p.eval_f(v) : p.eval_g(v); };
  const double base_smooth = smooth(moving);
  const double base =
      base_smooth + (is_x ? p.eval_g(point.y) : p.eval_f(point.x)) - dot(point.lambda, r0) +
      0.5 * beta * dot(r0, r0);
  const double slack = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::fabs(base));

  double t = 1.0;
  for (std::size_t i = 0; i <= params.max_backtracks; ++i) {
    Vec trial = moving;
    axpy(t, d, trial);
    const double change = (smooth(trial) - base_smooth) + t * lin + t * t * quad;
    if (change <= -params.rho * t * d_hnorm2 + slack) return {t, i};
    t *= params.nu;
  }
  throw Error(ErrorKind::LineSearchFailed,
              std::string(is_x ? "x" : "y") + " line search exceeded max_backtracks");
}

Vec dual_update(const Vec& lambda, double stepsize, double beta, const Vec& residual) {
  require(beta > 0.0, ErrorKind::InvalidArgument, "beta must be positive");
  require(lambda.size() == residual.size(), ErrorKind::DimensionMismatch,
          "multiplier and residual sizes differ");
  Vec out = lambda;
  axpy(-stepsize * beta, residual, out);
  return out;
}

std::pair<AugmentedIterate, StepRecord> iterate_once(const CompositeProblem& p,
                                                     const AugmentedIterate& state,
                                                     ProximalModel& model,
                                                     const SolverParams& params, double eta_y) {
  const Iterate& w = state.w;
  const double beta = params.beta;
  StepRecord rec;
  rec.ell = model.ell();
  rec.sigma = model.sigma();

  // x step
  const Vec gx = x_model_gradient(p, w, beta);
  const Vec x_tilde = w.x - model.factor_x().solve(gx);
  const Acceleration ax = hybrid_accelerate(x_tilde, w.x, params.alpha);
  rec.gx_dot_dx = dot(gx, ax.d);
  rec.dx_hnorm2 = quad_form(model.hcal_x(), ax.d);
  const LineSearchResult lsx = line_search(Block::X, p, w, ax.d, rec.dx_hnorm2, params);
  Vec x_next = w.x;
  axpy(lsx.t, ax.d, x_next);

  // first dual update
  const Vec a_x_next = p.apply_a(x_next);
  const Vec lambda_half = dual_update(w.lambda, params.r, beta, a_x_next - w.y);

  // y step
  const Vec gy = y_model_gradient(p, x_next, w.y, lambda_half, beta);
  const Vec y_tilde = w.y - model.factor_y().solve(gy);
  const Acceleration ay = hybrid_accelerate(y_tilde, w.y, params.alpha);
  rec.gy_dot_dy = dot(gy, ay.d);
  rec.dy_hnorm2 = quad_form(model.hcal_y(), ay.d);
  const Iterate mid{x_next, w.y, lambda_half};
  const LineSearchResult lsy = line_search(Block::Y, p, mid, ay.d, rec.dy_hnorm2, params);
  Vec y_next = w.y;
  axpy(lsy.t, ay.d, y_next);

  // second dual update
  Vec lambda_next = dual_update(lambda_half, params.s, beta, a_x_next - y_next);

  AugmentedIterate next{{std::move(x_next), std::move(y_next), std::move(lambda_next)}, ay.d};
  if (!finite_iterate(next.w)) throw Error(ErrorKind::NumericalError, "iterate is not finite");

  rec.t_x = lsx.t;
  rec.t_y = lsy.t;
  rec.backtracks_x = lsx.backtracks;
  rec.backtracks_y = lsy.backtracks;
  rec.norm_dx = norm2(ax.d);
  rec.norm_dy = norm2(ay.d);
  rec.L_beta = eval_alf(p, next.w, beta);
  rec.L_hat = std::numeric_limits<double>::quiet_NaN();
  if (std::isfinite(eta_y) && p.lipschitz_g()) {
    SolverParams effective = params;
    effective.sigma = model.sigma();
    rec.L_hat = rec.L_beta + merit_weight(p, effective, eta_y + beta + model.sigma()) *
                                 dot(next.d_y_prev, next.d_y_prev);
  }
  const KktResidual kkt = kkt_residual(p, next.w);
  rec.feas_inf = kkt.feas;
  rec.kkt_inf = kkt.total;
  rec.kkt_composite = kkt.composite;
  rec.ofv = composite_objective(p, next.w.x);
  rec.ofv_split = p.eval_f(next.w.x) + p.eval_g(next.w.y);
  rec.step_rel = step_norm_inf(next.w, w) / std::max(1.0, iterate_norm_inf(w));
  if (!std::isfinite(rec.L_beta) || !std::isfinite(rec.ofv)) {
    throw Error(ErrorKind::NumericalError, "merit value is not finite");
  }

  // Hessian refresh at the new point
  auto [h_x, h_y] = hessian_pair(p, next.w.x, next.w.y);
  model.refresh(p, std::move(h_x), std::move(h_y));
  return {std::move(next), rec};
}

SolveResult run(const CompositeProblem& p, const Iterate& w0, const SolverParams& params,
                std::size_t snapshot_every) {
  ensure_valid(params);
  require(w0.x.size() == p.n1() && w0.y.size() == p.n2() && w0.lambda.size() == p.n2(),
          ErrorKind::DimensionMismatch, "initial iterate does not match problem dimensions");
  require(finite_iterate(w0), ErrorKind::InvalidArgument, "initial iterate is not finite");

  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  SolveResult res;
  res.unsupported_by_theory = !params.alpha_supported();
  res.final = w0;
  AugmentedIterate state = AugmentedIterate::from(w0);
  if (snapshot_every > 0) res.snapshots.push_back(w0.x);
  try {
    auto [h_x, h_y] = hessian_pair(p, w0.x, w0.y);
    const double eta_y = eta_y_bound(p, h_y);
    ProximalModel model(p, params, std::move(h_x), std::move(h_y));
    res.initial_L_beta = eval_alf(p, w0, params.beta);
    res.merit_weight = std::numeric_limits<double>::quiet_NaN();
    if (p.lipschitz_g()) res.merit_weight = merit_weight(p, params, eta_y + params.beta + params.sigma);
    res.initial_L_hat = res.initial_L_beta;

    for (std::size_t k = 0; k < params.max_iter; ++k) {
      auto [next, rec] = iterate_once(p, state, model, params, eta_y);
      rec.k = k;
      rec.elapsed = std::chrono::duration<double>(clock::now() - start).count();
      const bool exact = next.w == state.w;
      state = std::move(next);
      res.trace.push_back(rec);
      if (snapshot_every > 0 && (k + 1) % snapshot_every == 0) res.snapshots.push_back(state.w.x);
      if (exact || rec.step_rel <= params.tol_step) {
        res.status = SolveStatus::Converged;
        res.exact_fixed_point = exact;
        break;
      }
    }
    if (res.status != SolveStatus::Converged) res.status = SolveStatus::IterLimit;
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::LineSearchFailed:
        res.status = SolveStatus::LineSearchFailed;
        break;
      case ErrorKind::NumericalError:
      case ErrorKind::ProximalNotPD:
        res.status = SolveStatus::NumericalError;
        break;
      default:
        throw;
    }
    res.message = e.what();
  }
  res.final = state.w;
  res.iterations = res.trace.size();
  return res;
}

}  // namespace happrs
