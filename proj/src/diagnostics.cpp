#include "happrs/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "happrs/core/error.hpp"
#include "happrs/core/linalg.hpp"

namespace happrs {
namespace {

struct Curvature {
  double eta = 0.0;
  double lo = 0.0;
};

Curvature curvature_of(const Mat& h) {
  require(h.square(), ErrorKind::DimensionMismatch, "Hessian approximation must be square");
  require(asymmetry(h) <= 1e-10 * std::max(1.0, max_abs(h)), ErrorKind::InvalidArgument,
          "Hessian approximation must be symmetric");
  Curvature c;
  c.eta = largest_abs_eigenvalue(h).value;
  const EigenEstimate lo = smallest_eigenvalue(h);
  c.lo = lo.converged ? lo.value : -c.eta;
  return c;
}

Curvature curvature_of(const CurvatureBounds& b) {
  return {std::max(std::fabs(b.lo), std::fabs(b.hi)), b.lo};
}

SpectralBounds assemble(const CompositeProblem& p, const SolverParams& params, Curvature cx,
                        Curvature cy) {
  SpectralBounds b;
  b.eta_x = cx.eta;
  b.eta_y = cy.eta;
  b.lambda_lo_x = cx.lo;
  b.lambda_lo_y = cy.lo;
  b.eta1_x = cx.lo + params.beta * p.min_eig_ata() + params.ell;
  b.eta1_y = cy.lo + params.beta + params.sigma;
  b.eta2_x = cx.eta + params.beta * p.norm_ata() + params.ell;
  b.eta2_y = cy.eta + params.beta + params.sigma;
  return b;
}

void check_floors(const SpectralBounds& b) {
  if (!(b.eta1_x > 0.0) || !(b.eta1_y > 0.0)) {
    std::ostringstream os;
    os << "eta1_x = " << b.eta1_x << ", eta1_y = " << b.eta1_y << "; raise ell or sigma";
    throw Error(ErrorKind::NonPositiveEta1, os.str());
  }
}

std::pair<Curvature, Curvature> uniform_curvature(const CompositeProblem& p) {
  const Curvature cx = p.curvature_x() ? curvature_of(*p.curvature_x())
                                       : curvature_of(p.hess_f_at(Vec(p.n1())));
  const Curvature cy = p.curvature_y() ? curvature_of(*p.curvature_y())
                                       : curvature_of(p.hess_g_at(Vec(p.n2())));
  return {cx, cy};
}

double lipschitz_or_throw(const std::optional<double>& l, const char* name) {
  require(l.has_value(), ErrorKind::UnknownLipschitz, std::string(name) + " is unknown");
  return *l;
}

// Smallest value strictly above a lower bound, with a 10% margin; the
// result is always positive.
double strictly_above(double lower) { return lower > 0.0 ? 1.1 * lower : 0.1; }

}  // namespace

std::string_view to_string(DualRegime regime) {
  switch (regime) {
    case DualRegime::Ascent: return "Ascent";
    case DualRegime::Descent: return "Descent";
    case DualRegime::Mixed: return "Mixed";
  }
  return "Mixed";
}

DualRegime classify_regime(double r, double s) {
  if (r > 0.0 && s > 0.0) return DualRegime::Ascent;
  if (r < 0.0 && s < 0.0) return DualRegime::Descent;
  return DualRegime::Mixed;
}

KktResidual kkt_residual(const CompositeProblem& p, const Iterate& w) {
  require(w.x.size() == p.n1() && w.y.size() == p.n2() && w.lambda.size() == p.n2(),
          ErrorKind::DimensionMismatch, "iterate does not match problem dimensions");
  KktResidual k;
  const Vec ax = p.apply_a(w.x);
  k.stat_x = norm_inf(p.grad_f(w.x) - p.apply_at(w.lambda));
  k.stat_y = norm_inf(p.grad_g(w.y) + w.lambda);
  k.feas = norm_inf(ax - w.y);
  k.composite = norm_inf(p.grad_f(w.x) + p.apply_at(p.grad_g(ax)));
  k.total = std::max({k.stat_x, k.stat_y, k.feas});
  return k;
}

SpectralBounds spectral_bounds(const CompositeProblem& p, const SolverParams& params,
                               const Mat& h_x, const Mat& h_y) {
  require(h_x.rows() == p.n1() && h_y.rows() == p.n2(), ErrorKind::DimensionMismatch,
          "Hessian approximations do not match problem dimensions");
  const SpectralBounds b = assemble(p, params, curvature_of(h_x), curvature_of(h_y));
  check_floors(b);
  return b;
}

SpectralBounds uniform_spectral_bounds(const CompositeProblem& p, const SolverParams& params) {
  const auto [cx, cy] = uniform_curvature(p);
  const SpectralBounds b = assemble(p, params, cx, cy);
  check_floors(b);
  return b;
}

double compute_gamma(const CompositeProblem& p, const SolverParams& params,
                     const SpectralBounds& bounds) {
  const double lf = lipschitz_or_throw(p.lipschitz_f(), "L_f");
  const double lg = lipschitz_or_throw(p.lipschitz_g(), "L_g");
  check_floors(bounds);
  const double c = 1.0 / (1.0 + params.alpha) - params.rho;
  if (!(c > 0.0)) {
    require(params.relaxed_alpha, ErrorKind::InvalidArgument,
            "no step floor for alpha >= 1/rho - 1");
    return 0.0;
  }
  const double inf = std::numeric_limits<double>::infinity();
  const double denom_x = lf + params.beta * p.norm_ata();
  const double denom_y = lg + params.beta;
  const double tx = denom_x > 0.0 ? c * bounds.eta1_x / denom_x : inf;
  const double ty = denom_y > 0.0 ? c * bounds.eta1_y / denom_y : inf;
  return params.nu * std::min({1.0, tx, ty});
}

std::pair<double, double> compute_deltas(const CompositeProblem& p, const SolverParams& params,
                                         const SpectralBounds& bounds, double gamma) {
  const double lg = lipschitz_or_throw(p.lipschitz_g(), "L_g");
  const double rs = std::fabs(params.r + params.s);
  require(rs > 0.0, ErrorKind::InvalidArgument, "r + s = 0");
  const double b = params.beta;
  const double rg = params.rho * gamma;
  const double one_minus_s = 1.0 - params.s;
  const double delta_x = rg * bounds.eta1_x - 6.0 * one_minus_s * one_minus_s * b * p.max_eig_ata() / rs;
  const double h = bounds.eta2_y / (1.0 + params.alpha);
  const double delta_y = rg * bounds.eta1_y -
                         6.0 / (rs * b) * (lg * lg + (1.0 + params.s * params.s) * b * b + 2.0 * h * h) -
                         std::fabs(params.r * params.s) * b / rs;
  return {delta_x, delta_y};
}

DiagnosticsReport diagnose(const CompositeProblem& p, const SolverParams& params,
                           const SpectralBounds& bounds) {
  DiagnosticsReport rep;
  rep.bounds = bounds;
  rep.regime = classify_regime(params.r, params.s);
  rep.violations = validate_params(params, params.relaxed_alpha);
  if (!params.alpha_supported()) {
    rep.warnings.emplace_back("alpha outside (-1, 1/rho - 1): line-search analysis does not apply");
  }
  rep.gamma = compute_gamma(p, params, bounds);
  if (rep.gamma == 0.0) rep.warnings.emplace_back("step floor gamma is 0");
  std::tie(rep.delta_x, rep.delta_y) = compute_deltas(p, params, bounds, rep.gamma);
  rep.margins_positive = rep.delta_x > 0.0 && rep.delta_y > 0.0;
  return rep;
}

SolverParams suggest_params(DualDirection direction, const CompositeProblem& p,
                            const SolverParams& partial) {
  const double lf = lipschitz_or_throw(p.lipschitz_f(), "L_f");
  const double lg = lipschitz_or_throw(p.lipschitz_g(), "L_g");
  SolverParams out = partial;
  out.relaxed_alpha = false;
  const double c = 1.0 / (1.0 + out.alpha) - out.rho;
  require(c > 0.0 && out.alpha > -1.0, ErrorKind::InvalidArgument,
          "suggest_params needs alpha in (-1, 1/rho - 1)");
  require(out.beta > 0.0 && out.rho > 0.0 && out.rho < 1.0 && out.nu > 0.0 && out.nu < 1.0,
          ErrorKind::InvalidArgument, "suggest_params needs valid rho, nu, beta");

  const auto [cx, cy] = uniform_curvature(p);
  const double lo_x = cx.lo;
  const double lo_y = cy.lo;
  const double eta_y = cy.eta;
  const double b = out.beta;

  // ell, sigma large enough that the step floor saturates: gamma = nu.
  const double ell_sat = (lf + b * p.norm_ata()) / c - lo_x - b * p.min_eig_ata();
  const double sigma_sat = (lg + b) / c - lo_y - b;
  const double gamma = out.nu;
  const double rg = out.rho * gamma;
  const double alpha1 = 1.0 + out.alpha;

  auto r_numerator = [&](double sigma) {
    const double h = (eta_y + b + sigma) / alpha1;
    return 6.0 * (lg * lg + 2.0 * b * b + 2.0 * h * h);
  };

  if (direction == DualDirection::ALDA) {
    out.s = 1.0;
    out.ell = strictly_above(std::max(-lo_x - b * p.min_eig_ata(), ell_sat));
    out.sigma = strictly_above(std::max(b / rg - lo_y - b, sigma_sat));
    out.r = r_numerator(out.sigma) / (b * (rg * (lo_y + b + out.sigma) - b));
  } else {
    out.s = (partial.s >= -1.0 && partial.s < 0.0) ? partial.s : -1.0;
    out.sigma = strictly_above(std::max(-out.s * b / rg - lo_y - b, sigma_sat));
    out.r = -r_numerator(out.sigma) / (b * (rg * (lo_y + b + out.sigma) + out.s * b));
    const double ell_lb = -6.0 * (1.0 - out.s) * (1.0 - out.s) * b * p.max_eig_ata() /
                              (rg * (out.r + out.s)) -
                          lo_x - b * p.min_eig_ata();
    out.ell = strictly_above(std::max(ell_lb, ell_sat));
  }
  ensure_valid(out);
  return out;
}

}  // namespace happrs
