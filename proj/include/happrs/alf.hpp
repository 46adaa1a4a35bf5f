#pragma once

#include "happrs/core/dense.hpp"
#include "happrs/params.hpp"
#include "happrs/problem.hpp"

namespace happrs {

/// Primal-dual point w = (x, y, lambda).
struct Iterate {
  Vec x;
  Vec y;
  Vec lambda;

  static Iterate zeros(const CompositeProblem& p) {
    return {Vec(p.n1()), Vec(p.n2()), Vec(p.n2())};
  }
  friend bool operator==(const Iterate&, const Iterate&) = default;
};

/// w together with the previous y search direction; d_y_prev starts at zero.
struct AugmentedIterate {
  Iterate w;
  Vec d_y_prev;

  static AugmentedIterate from(const Iterate& w) { return {w, Vec(w.y.size())}; }
};

struct AlfGradient {
  Vec gx;
  Vec gy;
  Vec glambda;
};

// Augmented Lagrangian
//   L_beta(x, y, lambda) = f(x) + g(y) - lambda^T (Ax - y) + beta/2 |Ax - y|^2.
// Stationary points satisfy grad f(x) = A^T lambda, grad g(y) = -lambda, Ax = y.
double eval_alf(const CompositeProblem& p, const Iterate& w, double beta);

AlfGradient grad_alf(const CompositeProblem& p, const Iterate& w, double beta);

/// Coefficient of |d_y_prev|^2 in the merit function:
/// 6 / (|r + s| beta) * (L_g^2 + beta^2 + (eta2_y / (1 + alpha))^2).
double merit_weight(const CompositeProblem& p, const SolverParams& params, double eta2_y);

/// L_beta(w) + merit_weight * |d_y_prev|^2.
double eval_merit_hat(const CompositeProblem& p, const AugmentedIterate& what,
                      const SolverParams& params, double eta2_y);

}  // namespace happrs
