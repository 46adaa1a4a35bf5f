#include "happrs/problem.hpp"

#include <cmath>
#include <string>

#include "happrs/core/error.hpp"
#include "happrs/core/kernels.hpp"
#include "happrs/core/linalg.hpp"

namespace happrs {
namespace {

void check_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + ": got " + std::to_string(got) + ", want " +
                    std::to_string(want));
  }
}

// max_t |t (1 - t^2)| over t in [-1, 1], attained at t = 1/sqrt(3).
const double kTanhCurvature = 2.0 / (3.0 * std::sqrt(3.0));

}  // namespace

CompositeProblem::CompositeProblem(std::string name, Mat a, Functions fns,
                                   std::optional<double> lipschitz_f,
                                   std::optional<double> lipschitz_g)
    : name_(std::move(name)),
      a_(std::make_shared<const Mat>(std::move(a))),
      fns_(std::move(fns)),
      lipschitz_f_(lipschitz_f),
      lipschitz_g_(lipschitz_g) {
  require(a_->rows() > 0 && a_->cols() > 0, ErrorKind::InvalidArgument, "A must be nonempty");
  require(all_finite(*a_), ErrorKind::InvalidArgument, "A has non-finite entries");
  require(fns_.f && fns_.grad_f && fns_.hess_f && fns_.g && fns_.grad_g && fns_.hess_g,
          ErrorKind::InvalidArgument, "all problem callbacks are required");
  require(!lipschitz_f_ || *lipschitz_f_ >= 0.0, ErrorKind::InvalidArgument, "L_f < 0");
  require(!lipschitz_g_ || *lipschitz_g_ >= 0.0, ErrorKind::InvalidArgument, "L_g < 0");
  ata_ = std::make_shared<const Mat>(gram(*a_));
  max_eig_ata_ = largest_abs_eigenvalue(*ata_).value;
  min_eig_ata_ = a_->rows() < a_->cols() ? 0.0 : smallest_eigenvalue_psd(*ata_).value;
}

Vec CompositeProblem::apply_a(const Vec& x) const { return matvec(*a_, x); }
Vec CompositeProblem::apply_at(const Vec& v) const { return matvec_t(*a_, v); }

double CompositeProblem::eval_f(const Vec& x) const {
  check_dim(x.size(), n1(), "eval_f");
  return fns_.f(x);
}

Vec CompositeProblem::grad_f(const Vec& x) const {
  check_dim(x.size(), n1(), "grad_f");
  return fns_.grad_f(x);
}

Mat CompositeProblem::hess_f_at(const Vec& x) const {
  check_dim(x.size(), n1(), "hess_f_at");
  return fns_.hess_f(x);
}

double CompositeProblem::eval_g(const Vec& y) const {
  check_dim(y.size(), n2(), "eval_g");
  return fns_.g(y);
}

Vec CompositeProblem::grad_g(const Vec& y) const {
  check_dim(y.size(), n2(), "grad_g");
  return fns_.grad_g(y);
}

Mat CompositeProblem::hess_g_at(const Vec& y) const {
  check_dim(y.size(), n2(), "hess_g_at");
  return fns_.hess_g(y);
}

double composite_objective(const CompositeProblem& p, const Vec& x) {
  check_dim(x.size(), p.n1(), "composite_objective");
  return p.eval_f(x) + p.eval_g(p.apply_a(x));
}

Vec composite_gradient(const CompositeProblem& p, const Vec& x) {
  check_dim(x.size(), p.n1(), "composite_gradient");
  return p.grad_f(x) + p.apply_at(p.grad_g(p.apply_a(x)));
}

HuberValue huber(double z, double mu) {
  require(mu > 0.0, ErrorKind::InvalidArgument, "huber needs mu > 0");
  if (std::fabs(z) < mu) return {z * z / (2.0 * mu), z / mu};
  return {std::fabs(z) - 0.5 * mu, z > 0.0 ? 1.0 : -1.0};
}

Mat forward_difference(std::size_t n) {
  require(n >= 2, ErrorKind::InvalidArgument, "forward_difference needs n >= 2");
  Mat a(n - 1, n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    a(i, i) = -1.0;
    a(i, i + 1) = 1.0;
  }
  return a;
}

std::pair<Mat, Mat> hessian_pair(const CompositeProblem& p, const Vec& x, const Vec& y) {
  return {p.hess_f_at(x), p.hess_g_at(y)};
}

CompositeProblem make_quadratic(Vec c_f, Vec c_g, Mat a) {
  check_dim(a.cols(), c_f.size(), "make_quadratic: A columns vs c_f");
  check_dim(a.rows(), c_g.size(), "make_quadratic: A rows vs c_g");
  const std::size_t n1 = c_f.size();
  const std::size_t n2 = c_g.size();
  auto cf = std::make_shared<const Vec>(c_f);
  auto cg = std::make_shared<const Vec>(c_g);
  CompositeProblem::Functions fns{
      [cf](const Vec& x) { const Vec r = x - *cf; return 0.5 * dot(r, r); },
      [cf](const Vec& x) { return x - *cf; },
      [n1](const Vec&) { return Mat::identity(n1); },
      [cg](const Vec& y) { const Vec r = y - *cg; return 0.5 * dot(r, r); },
      [cg](const Vec& y) { return y - *cg; },
      [n2](const Vec&) { return Mat::identity(n2); },
  };
  CompositeProblem p("quadratic", a, std::move(fns), 1.0, 1.0);
  p.set_curvature(CurvatureBounds{1.0, 1.0}, CurvatureBounds{1.0, 1.0});
  p.set_data(QuadraticData{std::move(c_f), std::move(c_g), std::move(a)});
  return p;
}

CompositeProblem make_classification(std::size_t n, std::size_t t, double mu, Rng& rng) {
  require(n >= 2, ErrorKind::InvalidArgument, "classification needs n >= 2");
  require(t >= 1, ErrorKind::InvalidArgument, "classification needs T >= 1");
  require(mu > 0.0, ErrorKind::InvalidArgument, "classification needs mu > 0");
  // normc(randn(n, T)): column-major draw order, then unit columns.
  Mat features(n, t);
  for (std::size_t j = 0; j < t; ++j) {
    for (std::size_t i = 0; i < n; ++i) features(i, j) = rng.normal();
  }
  for (std::size_t j = 0; j < t; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += features(i, j) * features(i, j);
    const double norm = std::sqrt(s);
    for (std::size_t i = 0; i < n; ++i) features(i, j) /= norm;
  }
  Vec labels(t);
  for (auto& b : labels) b = rng.sign();
  return make_classification(ClassificationData{std::move(features), std::move(labels), mu});
}

CompositeProblem make_classification(ClassificationData data) {
  const std::size_t n = data.features.rows();
  const std::size_t t = data.features.cols();
  require(n >= 2 && t >= 1, ErrorKind::InvalidArgument, "classification needs n >= 2, T >= 1");
  require(data.mu > 0.0, ErrorKind::InvalidArgument, "classification needs mu > 0");
  check_dim(data.labels.size(), t, "classification labels");
  for (double b : data.labels) {
    require(b == 1.0 || b == -1.0, ErrorKind::InvalidArgument, "labels must be +1 or -1");
  }

  // Rows of `signed_rows` are b_i a_i^T, so z = signed_rows * x.
  auto signed_rows = std::make_shared<Mat>(transpose(data.features));
  for (std::size_t i = 0; i < t; ++i) {
    for (double& v : signed_rows->row(i)) v *= data.labels[i];
  }
  std::shared_ptr<const Mat> rows = signed_rows;
  const double inv_t = 1.0 / static_cast<double>(t);
  const double mu = data.mu;

  CompositeProblem::Functions fns{
      [rows, inv_t](const Vec& x) {
        const Vec z = matvec(*rows, x);
        double s = 0.0;
        for (double zi : z) s += 1.0 - std::tanh(zi);
        return s * inv_t;
      },
      [rows, inv_t](const Vec& x) {
        Vec z = matvec(*rows, x);
        for (double& zi : z) {
          const double th = std::tanh(zi);
          zi = -(1.0 - th * th) * inv_t;
        }
        return matvec_t(*rows, z);
      },
      [rows, inv_t, n](const Vec& x) {
        const Vec z = matvec(*rows, x);
        Mat h(n, n);
        for (std::size_t i = 0; i < z.size(); ++i) {
          const double th = std::tanh(z[i]);
          add_rank1_upper(h, 2.0 * inv_t * th * (1.0 - th * th), rows->row(i));
        }
        mirror_upper(h);
        return h;
      },
      [mu](const Vec& y) { return 0.5 * mu * dot(y, y); },
      [mu](const Vec& y) { return mu * y; },
      [mu, n](const Vec&) { return Mat::identity(n - 1, mu); },
  };

  // |hess f| <= (2 c / T) lambda_max(sum_i a_i a_i^T), c = max |tanh (1 - tanh^2)|.
  const double top = largest_abs_eigenvalue(gram(*rows)).value;
  const double lf = 2.0 * kTanhCurvature * inv_t * top;
  CompositeProblem p("classification", forward_difference(n), std::move(fns), lf, mu);
  p.set_curvature(CurvatureBounds{-lf, lf}, CurvatureBounds{mu, mu});
  p.set_data(std::move(data));
  return p;
}

CompositeProblem make_huber_lasso(std::size_t m, std::size_t n, double density, double tau,
                                  double mu, Rng& rng) {
  require(m >= 1 && m < n, ErrorKind::InvalidArgument, "huber_lasso needs 1 <= m < n");
  require(density > 0.0 && density <= 1.0, ErrorKind::InvalidArgument,
          "density must lie in (0, 1]");
  require(tau > 0.0 && mu > 0.0, ErrorKind::InvalidArgument, "huber_lasso needs tau, mu > 0");
  // randn(m, n) in column-major draw order.
  Mat a(m, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) a(i, j) = rng.normal();
  }
  Vec u = sparse_normal_sample(rng, n, density);
  Vec d = matvec(a, u);
  return make_huber_lasso(LassoData{std::move(a), std::move(d), std::move(u), tau, mu});
}

CompositeProblem make_huber_lasso(LassoData data) {
  const std::size_t n = data.a.cols();
  const std::size_t m = data.a.rows();
  check_dim(data.d.size(), m, "huber_lasso d");
  check_dim(data.u.size(), n, "huber_lasso u");
  require(data.tau > 0.0 && data.mu_huber > 0.0, ErrorKind::InvalidArgument,
          "huber_lasso needs tau, mu > 0");
  const double tau = data.tau;
  const double mu = data.mu_huber;
  auto d = std::make_shared<const Vec>(data.d);

  CompositeProblem::Functions fns{
      [tau, mu](const Vec& x) {
        double s = 0.0;
        for (double xi : x) s += huber(xi, mu).value;
        return tau * s;
      },
      [tau, mu](const Vec& x) {
        Vec g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = tau * huber(x[i], mu).derivative;
        return g;
      },
      [tau, mu](const Vec& x) {
        Mat h(x.size(), x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
          if (std::fabs(x[i]) < mu) h(i, i) = tau / mu;
        }
        return h;
      },
      [d](const Vec& y) { const Vec r = y - *d; return 0.5 * dot(r, r); },
      [d](const Vec& y) { return y - *d; },
      [m](const Vec&) { return Mat::identity(m); },
  };
  CompositeProblem p("huber_lasso", data.a, std::move(fns), tau / mu, 1.0);
  p.set_curvature(CurvatureBounds{0.0, tau / mu}, CurvatureBounds{1.0, 1.0});
  p.set_data(std::move(data));
  return p;
}

}  // namespace happrs
