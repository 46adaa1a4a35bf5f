#include <doctest.h>

#include <cmath>

#include "happrs/core/error.hpp"
#include "happrs/core/linalg.hpp"
#include "happrs/diagnostics.hpp"
#include "happrs/solver.hpp"
#include "oracles.hpp"

using namespace happrs;

namespace {

// One-dimensional problem with A = 0 and g = 0, for line-search checks.
CompositeProblem scalar_problem(std::function<double(double)> f, std::function<double(double)> df) {
  CompositeProblem::Functions fns;
  fns.f = [f](const Vec& x) { return f(x[0]); };
  fns.grad_f = [df](const Vec& x) { return Vec{df(x[0])}; };
  fns.hess_f = [](const Vec&) { return Mat::identity(1); };
  fns.g = [](const Vec&) { return 0.0; };
  fns.grad_g = [](const Vec&) { return Vec{0.0}; };
  fns.hess_g = [](const Vec&) { return Mat(1, 1); };
  return CompositeProblem("scalar", Mat(1, 1), fns, std::nullopt, 0.0);
}

SolverParams spec_params() {
  SolverParams p;
  p.rho = 0.25;
  p.nu = 0.5;
  p.alpha = 0.0;
  p.beta = 1.0;
  p.ell = 1.0;
  p.sigma = 1.0;
  p.r = 0.1;
  p.s = 1.0;
  return p;
}

CompositeProblem oracle_1d() { return make_quadratic(Vec{1}, Vec{0}, Mat::identity(1)); }

CompositeProblem random_quadratic(Rng& rng, std::size_t n1, std::size_t n2) {
  return make_quadratic(normal_sample(rng, n1), normal_sample(rng, n2),
                        Mat::from_row_major(n2, n1, normal_sample(rng, n1 * n2).values()));
}

happrs::Iterate kkt_of(const CompositeProblem& p) {
  const auto& d = std::get<QuadraticData>(p.data());
  return oracle::quadratic_kkt(d.c_f, d.c_g, d.a);
}

}  // namespace

TEST_CASE("validate_params") {
  SolverParams p;
  CHECK(validate_params(p, false).empty());
  p.alpha = 2.0;
  const auto v = validate_params(p, false);
  REQUIRE(v.size() == 1);
  CHECK(v[0] == "alpha >= 1/rho - 1");
  CHECK(validate_params(p, true).empty());
  p = SolverParams{};
  p.r = 1.0;
  p.s = -1.0;
  REQUIRE(validate_params(p, false).size() == 1);
  CHECK(validate_params(p, false)[0] == "r + s = 0");
  p = SolverParams{};
  p.rho = 1.0;
  p.nu = 0.0;
  p.beta = -1.0;
  p.ell = 0.0;
  p.sigma = 0.0;
  p.max_iter = 0;
  CHECK(validate_params(p, false).size() == 7);  // rho = 1 also closes the alpha range
  CHECK_THROWS_AS(ensure_valid(p), Error);
}

TEST_CASE("solve_x_subproblem examples") {
  // f = 1/2 x^2, A = 1, H = 1, beta = ell = 1.
  const auto p = make_quadratic(Vec{0}, Vec{0}, Mat::identity(1));
  const auto params = spec_params();
  const Mat h = Mat::identity(1);
  CHECK(solve_x_subproblem(p, {Vec{3}, Vec{0}, Vec{0}}, h, params)[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(solve_x_subproblem(p, {Vec{0}, Vec{2}, Vec{1}}, h, params)[0] == doctest::Approx(1.0).epsilon(1e-15));
  const Iterate stationary{Vec{0.5}, Vec{0.5}, Vec{0.5}};
  CHECK(norm_inf(x_model_gradient(p, stationary, 1.0)) == 0.0);
  CHECK(solve_x_subproblem(p, stationary, h, params) == stationary.x);
  try {
    solve_x_subproblem(p, stationary, Mat::identity(1, -10.0), params);
    FAIL("indefinite proximal matrix accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ProximalNotPD);
  }
}

TEST_CASE("solve_y_subproblem examples") {
  const auto p = make_quadratic(Vec{0}, Vec{0}, Mat::identity(1));
  const auto params = spec_params();
  const Vec y = solve_y_subproblem(p, Vec{1}, Vec{0}, Vec{0}, Mat::identity(1), params);
  CHECK(y[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(solve_y_subproblem(p, Vec{1}, Vec{0.5}, Vec{0}, Mat::identity(1), params)[0] == 0.5);
}

TEST_CASE("subproblem solutions make the quadratic model stationary") {
  Rng rng(17);
  auto params = spec_params();
  params.ell = 2.0;
  params.sigma = 0.5;
  for (int k = 0; k < 10; ++k) {
    const auto p = random_quadratic(rng, 5, 5);
    const Iterate w{normal_sample(rng, 5), normal_sample(rng, 5), normal_sample(rng, 5)};
    const Mat hx = Mat::identity(5), hy = Mat::identity(5);
    const Vec gx = x_model_gradient(p, w, params.beta);
    const Vec xt = solve_x_subproblem(p, w, hx, params);
    const Mat hcal_x = proximal_matrix_x(p, hx, params.beta, params.ell);
    const Vec model_gx = gx + matvec(hcal_x, xt - w.x);
    CHECK(norm2(model_gx) <= 1e-9 * (1.0 + norm2(gx)));
    // model value vanishes in gradient along every coordinate: finite differences.
    auto model = [&](const Vec& v) {
      const Vec dv = v - w.x;
      return dot(gx, dv) + 0.5 * quad_form(hcal_x, dv);
    };
    CHECK(norm_inf(oracle::fd_gradient(model, xt)) <= 1e-6);

    const Vec gy = y_model_gradient(p, xt, w.y, w.lambda, params.beta);
    const Vec yt = solve_y_subproblem(p, xt, w.y, w.lambda, hy, params);
    const Vec model_gy = gy + matvec(proximal_matrix_y(hy, params.beta, params.sigma), yt - w.y);
    CHECK(norm2(model_gy) <= 1e-9 * (1.0 + norm2(gy)));
  }
}

TEST_CASE("hybrid_accelerate examples") {
  const auto a0 = hybrid_accelerate(Vec{2}, Vec{0.5}, 0.0);
  CHECK(a0.bar == Vec{2});
  CHECK(a0.d == Vec{1.5});
  const auto a1 = hybrid_accelerate(Vec{2}, Vec{0}, 1.0);
  CHECK(a1.bar == Vec{4});
  CHECK(a1.d == Vec{4});
  const auto a2 = hybrid_accelerate(Vec{2}, Vec{0}, -0.5);
  CHECK(a2.bar == Vec{1});
  CHECK(a2.d == Vec{1});
  CHECK_THROWS_AS(hybrid_accelerate(Vec{2}, Vec{0}, -1.0), Error);
}

TEST_CASE("line_search examples") {
  SolverParams params;
  params.rho = 0.4;
  params.nu = 0.6;
  params.alpha = 0.0;
  params.beta = 1.0;
  params.ell = 1.0;

  const auto half_sq = scalar_problem([](double x) { return 0.5 * x * x; }, [](double x) { return x; });
  const Iterate w{Vec{2}, Vec{0}, Vec{0}};
  const auto zero = line_search(Block::X, half_sq, w, Vec{0}, Mat::identity(1, 2.0), params);
  CHECK(zero.t == 1.0);
  CHECK(zero.backtracks == 0);
  // d = -1 from x = 2 with Hcal = 2.
  const auto one = line_search(Block::X, half_sq, w, Vec{-1}, Mat::identity(1, 2.0), params);
  CHECK(one.t == 1.0);
  CHECK(one.backtracks == 0);

  const auto quartic = scalar_problem([](double x) { return x * x * x * x; },
                                      [](double x) { return 4 * x * x * x; });
  const auto q = line_search(Block::X, quartic, {Vec{1}, Vec{0}, Vec{0}}, Vec{-2},
                             Mat::identity(1, 2.0), params);
  CHECK(q.backtracks == 3);
  CHECK(q.t == doctest::Approx(0.216).epsilon(1e-14));

  params.max_backtracks = 2;
  try {
    line_search(Block::X, quartic, {Vec{1}, Vec{0}, Vec{0}}, Vec{-2}, Mat::identity(1, 2.0), params);
    FAIL("line search should have failed");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::LineSearchFailed);
  }
}

TEST_CASE("line search on the y block evaluates the augmented Lagrangian") {
  Rng rng(3);
  const auto p = random_quadratic(rng, 3, 2);
  SolverParams params;
  const Iterate w{normal_sample(rng, 3), normal_sample(rng, 2), normal_sample(rng, 2)};
  const Vec d = normal_sample(rng, 2);
  const Mat hcal = Mat::identity(2, 3.0);
  const auto res = line_search(Block::Y, p, w, d, hcal, params);
  Iterate moved = w;
  axpy(res.t, d, moved.y);
  CHECK(eval_alf(p, moved, params.beta) <=
        eval_alf(p, w, params.beta) - params.rho * res.t * quad_form(hcal, d) + 1e-12);
  if (res.backtracks > 0) {
    Iterate prev = w;
    const double t_prev = res.t / params.nu;
    axpy(t_prev, d, prev.y);
    CHECK(eval_alf(p, prev, params.beta) >
          eval_alf(p, w, params.beta) - params.rho * t_prev * quad_form(hcal, d));
  }
}

TEST_CASE("dual_update examples") {
  CHECK(dual_update(Vec{1.5}, 0.0, 2.0, Vec{3}) == Vec{1.5});
  CHECK(dual_update(Vec{1.5}, 0.7, 2.0, Vec{0}) == Vec{1.5});
  CHECK(dual_update(Vec{1}, 0.5, 2.0, Vec{3}) == Vec{-2});
  CHECK_THROWS_AS(dual_update(Vec{1}, 0.5, 2.0, Vec{3, 4}), Error);
}

TEST_CASE("iterate_once at a KKT point is a fixed point") {
  Rng rng(8);
  const auto p = random_quadratic(rng, 4, 3);
  const auto star = kkt_of(p);
  auto params = spec_params();
  auto [hx, hy] = hessian_pair(p, star.x, star.y);
  ProximalModel model(p, params, hx, hy);
  const auto [next, rec] = iterate_once(p, AugmentedIterate::from(star), model, params);
  CHECK(oracle::iterate_sup_diff(next.w, star) <= 1e-12);
  CHECK(rec.t_x > 0.0);
}

TEST_CASE("iterate_once decreases the augmented Lagrangian on classification") {
  Rng rng(2);
  const auto p = make_classification(30, 30, 1e-3, rng);
  SolverParams params;  // rho 0.4, nu 0.6, beta 1, ell 5, sigma 10, r 0.1, s 1
  const auto w0 = Iterate::zeros(p);
  auto [hx, hy] = hessian_pair(p, w0.x, w0.y);
  ProximalModel model(p, params, hx, hy);
  const auto [next, rec] = iterate_once(p, AugmentedIterate::from(w0), model, params, 1e-3);
  CHECK(all_finite(next.w.x));
  CHECK(all_finite(next.w.lambda));
  CHECK(rec.L_beta < eval_alf(p, w0, params.beta));
  CHECK(next.d_y_prev.size() == p.n2());
}

TEST_CASE("proximal model raises ell until the matrix factors") {
  const auto p = make_quadratic(Vec(2), Vec(2), Mat::identity(2));
  SolverParams params;
  params.ell = 0.5;
  ProximalModel model(p, params, Mat::identity(2, -3.0), Mat::identity(2));
  // -3 + 1 + ell > 0 first holds at ell = 4.
  CHECK(model.ell() == 4.0);
  CHECK(model.sigma() == params.sigma);
  const auto count = model.factorizations();
  model.refresh(p, Mat::identity(2, -3.0), Mat::identity(2));
  CHECK(model.factorizations() == count);
  ProximalModel ymodel(p, params, Mat::identity(2), Mat::identity(2, -12.5));
  CHECK(ymodel.sigma() == 20.0);
}

TEST_CASE("run converges on the one-dimensional oracle") {
  const auto p = oracle_1d();
  auto params = spec_params();
  const auto res = run(p, Iterate::zeros(p), params);
  CHECK(res.status == SolveStatus::Converged);
  CHECK(std::fabs(res.final.x[0] - 0.5) <= 1e-3);
  CHECK(std::fabs(res.final.y[0] - 0.5) <= 1e-3);
  CHECK(std::fabs(res.final.lambda[0] + 0.5) <= 1e-3);
  CHECK(res.iterations == res.trace.size());
  for (const auto& r : res.trace) {
    CHECK(r.t_x > 0.0);
    CHECK(r.t_x <= 1.0);
    CHECK(r.t_y > 0.0);
    CHECK(r.t_y <= 1.0);
  }
}

TEST_CASE("run from the KKT point stops after one iteration") {
  const auto p = oracle_1d();
  const auto star = kkt_of(p);
  const auto res = run(p, star, spec_params());
  CHECK(res.status == SolveStatus::Converged);
  CHECK(res.iterations == 1);
  CHECK(kkt_residual(p, res.final).total <= 1e-10);
}

TEST_CASE("converged runs have vanishing directions and small composite residual") {
  Rng rng(40);
  for (int k = 0; k < 5; ++k) {
    const auto p = random_quadratic(rng, 5, 5);
    auto params = spec_params();
    params.tol_step = 1e-6;
    const auto res = run(p, Iterate::zeros(p), params);
    REQUIRE(res.status == SolveStatus::Converged);
    const auto& last = res.trace.back();
    const double wnorm = std::max({norm_inf(res.final.x), norm_inf(res.final.y),
                                   norm_inf(res.final.lambda)});
    CHECK(std::max(last.norm_dx, last.norm_dy) <= 10.0 * params.tol_step * (1.0 + wnorm));
    CHECK(kkt_residual(p, res.final).composite <= 1e-3);
  }
}

TEST_CASE("run rejects invalid parameters and mismatched starts") {
  const auto p = oracle_1d();
  auto params = spec_params();
  params.s = -0.1;
  CHECK_THROWS_AS(run(p, Iterate::zeros(p), params), Error);
  CHECK_THROWS_AS(run(p, Iterate{Vec{0, 0}, Vec{0}, Vec{0}}, spec_params()), Error);
}

TEST_CASE("relaxed alpha runs are tagged") {
  const auto p = oracle_1d();
  auto params = spec_params();
  params.rho = 0.4;
  params.alpha = 2.0;
  CHECK_THROWS_AS(run(p, Iterate::zeros(p), params), Error);
  params.relaxed_alpha = true;
  const auto res = run(p, Iterate::zeros(p), params);
  CHECK(res.unsupported_by_theory);
}

TEST_CASE("iteration limit and snapshots") {
  const auto p = oracle_1d();
  auto params = spec_params();
  params.max_iter = 3;
  params.tol_step = 0.0;
  const auto res = run(p, Iterate::zeros(p), params, 1);
  CHECK(res.status == SolveStatus::IterLimit);
  CHECK(res.iterations == 3);
  CHECK(res.snapshots.size() == 4);
  CHECK(res.snapshots.back() == res.final.x);
}
