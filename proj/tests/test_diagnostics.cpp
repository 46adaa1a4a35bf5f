#include <doctest.h>

#include <cmath>

#include "happrs/core/error.hpp"
#include "happrs/core/linalg.hpp"
#include "happrs/diagnostics.hpp"
#include "oracles.hpp"

using namespace happrs;

namespace {

CompositeProblem oracle_1d() { return make_quadratic(Vec{1}, Vec{0}, Mat::identity(1)); }

SolverParams example_params() {
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

SpectralBounds unit_bounds(double eta2_y = 3.0) {
  SpectralBounds b;
  b.eta1_x = 1.0;
  b.eta1_y = 1.0;
  b.eta2_y = eta2_y;
  return b;
}

}  // namespace

TEST_CASE("kkt_residual examples") {
  const auto p = oracle_1d();
  const auto at_star = kkt_residual(p, {Vec{0.5}, Vec{0.5}, Vec{-0.5}});
  CHECK(at_star.total <= 1e-12);
  CHECK(at_star.composite <= 1e-12);
  const auto origin = kkt_residual(p, Iterate::zeros(p));
  CHECK(origin.stat_x == 1.0);
  CHECK(origin.feas == 0.0);
  CHECK(origin.total == 1.0);

  const auto zero = make_quadratic(Vec(2), Vec(1), Mat(1, 2));
  CHECK(kkt_residual(zero, Iterate::zeros(zero)).total == 0.0);
}

TEST_CASE("regime classification partitions by signs") {
  CHECK(classify_regime(0.1, 1.0) == DualRegime::Ascent);
  CHECK(classify_regime(-0.1, -0.1) == DualRegime::Descent);
  CHECK(classify_regime(-0.1, 1.0) == DualRegime::Mixed);
  CHECK(classify_regime(0.1, -1.0) == DualRegime::Mixed);
  CHECK(classify_regime(0.0, 1.0) == DualRegime::Mixed);
  CHECK(to_string(DualRegime::Descent) == "Descent");
}

TEST_CASE("spectral_bounds examples") {
  const auto p = oracle_1d();
  auto params = example_params();
  const auto b = spectral_bounds(p, params, Mat::identity(1), Mat(1, 1));
  CHECK(b.eta1_x == doctest::Approx(3.0).epsilon(1e-7));
  CHECK(b.eta1_y == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(b.eta2_y == doctest::Approx(2.0).epsilon(1e-12));
  try {
    spectral_bounds(p, params, Mat::identity(1, -3.0), Mat(1, 1));
    FAIL("nonpositive eta1 accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonPositiveEta1);
  }
  CHECK_THROWS_AS(spectral_bounds(p, params, Mat::identity(1), Mat(2, 2)), Error);
}

TEST_CASE("spectral_bounds on an indefinite Hessian") {
  const auto p = make_quadratic(Vec(3), Vec(3), Mat::identity(3));
  auto params = example_params();
  params.ell = 10.0;
  const auto b = spectral_bounds(p, params, Mat::diagonal(Vec{2, -4, 1}), Mat::identity(3));
  CHECK(b.eta_x == doctest::Approx(4.0).epsilon(1e-7));
  CHECK(b.lambda_lo_x <= -4.0 + 1e-6);
  CHECK(b.lambda_lo_x >= -4.0 - 1e-6);
  CHECK(b.eta1_x == doctest::Approx(-4.0 + 1.0 + 10.0).epsilon(1e-6));
}

TEST_CASE("compute_gamma examples") {
  const auto p = oracle_1d();
  auto params = example_params();
  CHECK(compute_gamma(p, params, unit_bounds()) == doctest::Approx(0.1875).epsilon(1e-12));

  SpectralBounds huge = unit_bounds();
  huge.eta1_x = huge.eta1_y = 1e6;
  CHECK(compute_gamma(p, params, huge) == params.nu);

  double prev = compute_gamma(p, params, unit_bounds());
  for (double alpha : {0.5, 1.0, 2.0, 2.9, 2.99, 2.999}) {
    params.alpha = alpha;
    const double g = compute_gamma(p, params, unit_bounds());
    CHECK(g > 0.0);
    CHECK(g < prev);
    prev = g;
  }
  params.alpha = 3.5;
  CHECK_THROWS_AS(compute_gamma(p, params, unit_bounds()), Error);
  params.relaxed_alpha = true;
  CHECK(compute_gamma(p, params, unit_bounds()) == 0.0);
}

TEST_CASE("compute_deltas examples") {
  const auto p = oracle_1d();
  auto params = example_params();
  const auto [dx, dy] = compute_deltas(p, params, unit_bounds(), 0.1875);
  CHECK(dx == doctest::Approx(0.046875).epsilon(1e-14));
  const double expected_dy = 0.046875 - (6.0 / 1.1) * (1.0 + 2.0 + 18.0) - 0.1 / 1.1;
  CHECK(dy == doctest::Approx(expected_dy).epsilon(1e-13));
  CHECK(dy == doctest::Approx(-114.59).epsilon(1e-4));

  params.s = 0.5;
  params.r = 0.5;
  const auto [dx2, dy2] = compute_deltas(p, params, unit_bounds(), 0.1875);
  (void)dy2;
  CHECK(dx2 == doctest::Approx(0.046875 - 6.0 * 0.25 * p.max_eig_ata() / 1.0).epsilon(1e-12));
  params.r = -0.5;
  CHECK_THROWS_AS(compute_deltas(p, params, unit_bounds(), 0.1875), Error);
}

TEST_CASE("gamma is positive inside the supported alpha range") {
  Rng rng(12);
  for (int k = 0; k < 20; ++k) {
    const auto p = make_quadratic(normal_sample(rng, 3), normal_sample(rng, 2),
                                  Mat::from_row_major(2, 3, normal_sample(rng, 6).values()));
    SolverParams params;
    params.rho = 0.1 + 0.8 * rng.uniform();
    params.alpha = -0.9 + (1.0 / params.rho - 1.0 + 0.9) * rng.uniform();
    if (!params.alpha_supported()) continue;
    const auto b = uniform_spectral_bounds(p, params);
    CHECK(compute_gamma(p, params, b) > 0.0);
  }
}

TEST_CASE("diagnose reports the margins") {
  const auto p = oracle_1d();
  auto params = example_params();
  const auto report = diagnose(p, params, uniform_spectral_bounds(p, params));
  CHECK(report.regime == DualRegime::Ascent);
  CHECK(report.violations.empty());
  CHECK(report.margins_positive == (report.delta_x > 0.0 && report.delta_y > 0.0));
  CHECK_FALSE(report.margins_positive);
}

TEST_CASE("suggest_params recipes") {
  Rng rng(5);
  std::vector<CompositeProblem> problems{oracle_1d()};
  for (int k = 0; k < 5; ++k) {
    problems.push_back(make_quadratic(normal_sample(rng, 5), normal_sample(rng, 5),
                                      Mat::from_row_major(5, 5, normal_sample(rng, 25).values())));
  }
  Rng rc(1);
  problems.push_back(make_classification(20, 20, 1e-3, rc));
  for (const auto& p : problems) {
    for (double alpha : {0.0, 0.5}) {
      SolverParams partial;
      partial.alpha = alpha;
      const auto alda = suggest_params(DualDirection::ALDA, p, partial);
      CHECK(validate_params(alda, false).empty());
      CHECK(alda.s == 1.0);
      CHECK(alda.r > 0.0);
      const auto ra = diagnose(p, alda, uniform_spectral_bounds(p, alda));
      CHECK(ra.margins_positive);
      CHECK(ra.gamma == doctest::Approx(alda.nu).epsilon(1e-12));

      const auto aldd = suggest_params(DualDirection::ALDD, p, partial);
      CHECK(validate_params(aldd, false).empty());
      CHECK(aldd.r < 0.0);
      CHECK(aldd.s < 0.0);
      const auto rd = diagnose(p, aldd, uniform_spectral_bounds(p, aldd));
      CHECK(rd.margins_positive);
      CHECK(rd.regime == DualRegime::Descent);
    }
  }
  SolverParams partial;
  partial.s = -0.5;
  const auto keep = suggest_params(DualDirection::ALDD, oracle_1d(), partial);
  CHECK(keep.s == -0.5);
  partial.alpha = 2.0;
  CHECK_THROWS_AS(suggest_params(DualDirection::ALDA, oracle_1d(), partial), Error);
}
