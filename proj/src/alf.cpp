#include "happrs/alf.hpp"

#include <cmath>

#include "happrs/core/error.hpp"
#include "happrs/core/linalg.hpp"

namespace happrs {
namespace {

void check_iterate(const CompositeProblem& p, const Iterate& w) {
  if (w.x.size() != p.n1() || w.y.size() != p.n2() || w.lambda.size() != p.n2()) {
    throw Error(ErrorKind::DimensionMismatch, "iterate does not match problem dimensions");
  }
}

}  // namespace

double eval_alf(const CompositeProblem& p, const Iterate& w, double beta) {
  require(beta > 0.0, ErrorKind::InvalidArgument, "beta must be positive");
  check_iterate(p, w);
  const Vec res = p.apply_a(w.x) - w.y;
  return p.eval_f(w.x) + p.eval_g(w.y) - dot(w.lambda, res) + 0.5 * beta * dot(res, res);
}

AlfGradient grad_alf(const CompositeProblem& p, const Iterate& w, double beta) {
  require(beta > 0.0, ErrorKind::InvalidArgument, "beta must be positive");
  check_iterate(p, w);
  const Vec res = p.apply_a(w.x) - w.y;
  // shifted = lambda - beta (Ax - y)
  Vec shifted = w.lambda;
  axpy(-beta, res, shifted);
  AlfGradient g;
  g.gx = p.grad_f(w.x) - p.apply_at(shifted);
  g.gy = p.grad_g(w.y) + shifted;
  g.glambda = -res;
  return g;
}

double merit_weight(const CompositeProblem& p, const SolverParams& params, double eta2_y) {
  const double rs = std::fabs(params.r + params.s);
  require(rs > 0.0, ErrorKind::InvalidArgument, "merit function needs r + s != 0");
  require(params.beta > 0.0, ErrorKind::InvalidArgument, "beta must be positive");
  const auto lg = p.lipschitz_g();
  require(lg.has_value(), ErrorKind::UnknownLipschitz, "merit function needs L_g");
  const double b = params.beta;
  const double h = eta2_y / (1.0 + params.alpha);
  return 6.0 / (rs * b) * ((*lg) * (*lg) + b * b + h * h);
}

double eval_merit_hat(const CompositeProblem& p, const AugmentedIterate& what,
                      const SolverParams& params, double eta2_y) {
  if (what.d_y_prev.size() != p.n2()) {
    throw Error(ErrorKind::DimensionMismatch, "d_y_prev does not match n2");
  }
  const double weight = merit_weight(p, params, eta2_y);
  return eval_alf(p, what.w, params.beta) + weight * dot(what.d_y_prev, what.d_y_prev);
}

}  // namespace happrs
