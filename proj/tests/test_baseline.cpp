#include <doctest.h>

#include <cmath>

#include "happrs/baseline.hpp"
#include "happrs/core/error.hpp"
#include "happrs/core/linalg.hpp"
#include "oracles.hpp"

using namespace happrs;

TEST_CASE("fixed step reaches the minimizer of 1/2 x^2 in one step") {
  // f = 1/2 x^2, g = 0 through A = 0.
  const auto p = make_quadratic(Vec{0}, Vec{0}, Mat(1, 1));
  GdParams gd;
  gd.rule = GdParams::StepRule::Fixed;
  gd.step = 1.0;
  const auto res = gradient_descent(p, Vec{1}, gd);
  CHECK(res.status == SolveStatus::Converged);
  REQUIRE(res.trace.size() >= 1);
  CHECK(res.x[0] == 0.0);
  CHECK(res.trace.front().objective == 0.0);
}

TEST_CASE("composite gradient matches finite differences") {
  Rng rng(14);
  Rng rl(2);
  const auto p = make_huber_lasso(10, 30, 0.5, 1e-3, 0.1, rl);
  for (int k = 0; k < 10; ++k) {
    const Vec x = 0.2 * normal_sample(rng, p.n1());
    const auto fd = oracle::fd_gradient([&](const Vec& v) { return composite_objective(p, v); }, x);
    CHECK(oracle::fd_rel_error(composite_gradient(p, x), fd) <= 1e-6);
  }
}

TEST_CASE("armijo descent is monotone on the desk-scale lasso") {
  Rng rng(3);
  const auto p = make_huber_lasso(64, 256, 0.5, 1e-3, 0.1, rng);
  GdParams gd;
  gd.max_iter = 300;
  const auto res = gradient_descent(p, Vec(p.n1()), gd);
  REQUIRE(!res.trace.empty());
  double prev = res.initial_objective;
  for (const auto& s : res.trace) {
    CHECK(s.objective <= prev);
    prev = s.objective;
  }
  CHECK(prev < res.initial_objective);
}

TEST_CASE("armijo cap failure is reported") {
  CompositeProblem::Functions fns;
  // Gradient points the wrong way: no step can decrease f.
  fns.f = [](const Vec& x) { return x[0]; };
  fns.grad_f = [](const Vec&) { return Vec{-1.0}; };
  fns.hess_f = [](const Vec&) { return Mat(1, 1); };
  fns.g = [](const Vec&) { return 0.0; };
  fns.grad_g = [](const Vec&) { return Vec{0.0}; };
  fns.hess_g = [](const Vec&) { return Mat(1, 1); };
  const CompositeProblem p("broken", Mat(1, 1), fns, 0.0, 0.0);
  GdParams gd;
  gd.max_backtracks = 5;
  const auto res = gradient_descent(p, Vec{0}, gd);
  CHECK(res.status == SolveStatus::LineSearchFailed);
}

TEST_CASE("relative error series") {
  const std::vector<Vec> snaps{Vec{0, 0}, Vec{3, 4}, Vec{6, 8}};
  const auto e = relative_error_series(snaps, Vec{6, 8});
  REQUIRE(e.size() == 3);
  CHECK(e[0] == doctest::Approx(1.0));
  CHECK(e[1] == doctest::Approx(0.5));
  CHECK(e[2] == 0.0);
  const auto small = relative_error_series({Vec{0.5}}, Vec{0.0});
  CHECK(small[0] == 0.5);
}

TEST_CASE("baseline snapshots") {
  const auto p = make_quadratic(Vec{1, 2}, Vec{0}, Mat::from_row_major(1, 2, {1, 1}));
  GdParams gd;
  gd.max_iter = 10;
  gd.tol_grad = 0.0;
  const auto res = gradient_descent(p, Vec(2), gd, 5);
  CHECK(res.iterations == 10);
  CHECK(res.snapshots.size() == 3);
}
