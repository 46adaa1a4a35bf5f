#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "happrs/core/dense.hpp"
#include "happrs/core/rng.hpp"

namespace happrs {

/// Interval known to contain every eigenvalue of the Hessian approximations a
/// problem hands out, over the whole domain.
struct CurvatureBounds {
  double lo = 0.0;
  double hi = 0.0;
};

struct QuadraticData {
  Vec c_f;
  Vec c_g;
  Mat a;
};

/// Features are the columns of `features` (n x T), each of unit norm.
struct ClassificationData {
  Mat features;
  Vec labels;  // entries are exactly +1 or -1
  double mu = 0.0;
};

struct LassoData {
  Mat a;           // m x n
  Vec d;           // a * u
  Vec u;           // planted sparse vector
  double tau = 0.0;
  double mu_huber = 0.0;
};

using ProblemData = std::variant<std::monostate, QuadraticData, ClassificationData, LassoData>;

/// min f(x) + g(y) subject to A x = y, with smooth f and g.
///
/// Immutable after construction. Spectral data of A^T A is computed once here:
/// lambda_max by power iteration and lambda_min by shifted inverse iteration,
/// both to 1e-8 (lambda_min is exactly 0 when A has fewer rows than columns).
class CompositeProblem {
 public:
  struct Functions {
    std::function<double(const Vec&)> f;
    std::function<Vec(const Vec&)> grad_f;
    std::function<Mat(const Vec&)> hess_f;
    std::function<double(const Vec&)> g;
    std::function<Vec(const Vec&)> grad_g;
    std::function<Mat(const Vec&)> hess_g;
  };

  CompositeProblem(std::string name, Mat a, Functions fns, std::optional<double> lipschitz_f,
                   std::optional<double> lipschitz_g);

  const std::string& name() const noexcept { return name_; }
  std::size_t n1() const noexcept { return a_->cols(); }
  std::size_t n2() const noexcept { return a_->rows(); }

  const Mat& a() const noexcept { return *a_; }
  const Mat& ata() const noexcept { return *ata_; }
  Vec apply_a(const Vec& x) const;
  Vec apply_at(const Vec& v) const;

  double eval_f(const Vec& x) const;
  Vec grad_f(const Vec& x) const;
  Mat hess_f_at(const Vec& x) const;
  double eval_g(const Vec& y) const;
  Vec grad_g(const Vec& y) const;
  Mat hess_g_at(const Vec& y) const;

  std::optional<double> lipschitz_f() const noexcept { return lipschitz_f_; }
  std::optional<double> lipschitz_g() const noexcept { return lipschitz_g_; }

  double norm_ata() const noexcept { return max_eig_ata_; }
  double min_eig_ata() const noexcept { return min_eig_ata_; }
  double max_eig_ata() const noexcept { return max_eig_ata_; }

  std::optional<CurvatureBounds> curvature_x() const noexcept { return curvature_x_; }
  std::optional<CurvatureBounds> curvature_y() const noexcept { return curvature_y_; }
  void set_curvature(std::optional<CurvatureBounds> x, std::optional<CurvatureBounds> y) {
    curvature_x_ = x;
    curvature_y_ = y;
  }

  const ProblemData& data() const noexcept { return *data_; }
  void set_data(ProblemData data) { data_ = std::make_shared<const ProblemData>(std::move(data)); }

 private:
  std::string name_;
  std::shared_ptr<const Mat> a_;
  std::shared_ptr<const Mat> ata_;
  Functions fns_;
  std::optional<double> lipschitz_f_;
  std::optional<double> lipschitz_g_;
  double min_eig_ata_ = 0.0;
  double max_eig_ata_ = 0.0;
  std::optional<CurvatureBounds> curvature_x_;
  std::optional<CurvatureBounds> curvature_y_;
  std::shared_ptr<const ProblemData> data_ = std::make_shared<const ProblemData>();
};

/// f(x) + g(A x).
double composite_objective(const CompositeProblem& p, const Vec& x);

/// Gradient of composite_objective: grad f(x) + A^T grad g(A x).
Vec composite_gradient(const CompositeProblem& p, const Vec& x);

struct HuberValue {
  double value;
  double derivative;
};

/// z^2/(2 mu) inside the knee |z| < mu, |z| - mu/2 outside.
HuberValue huber(double z, double mu);

/// f(x) = 1/2 |x - c_f|^2, g(y) = 1/2 |y - c_g|^2. Exact identity Hessians.
CompositeProblem make_quadratic(Vec c_f, Vec c_g, Mat a);

/// Sigmoid-loss binary classification with a smoothness penalty on
/// successive differences: f(x) = (1/T) sum_i [1 - tanh(b_i a_i^T x)],
/// g(y) = (mu/2)|y|^2, A the (n-1) x n forward-difference matrix.
CompositeProblem make_classification(std::size_t n, std::size_t t, double mu, Rng& rng);
CompositeProblem make_classification(ClassificationData data);

/// Huber-smoothed LASSO: f(x) = tau h_mu(x), g(y) = 1/2 |y - d|^2,
/// A an m x n standard Gaussian matrix, d = A u for a planted sparse u.
CompositeProblem make_huber_lasso(std::size_t m, std::size_t n, double density, double tau,
                                  double mu, Rng& rng);
CompositeProblem make_huber_lasso(LassoData data);

/// (n-1) x n matrix with -1 on the diagonal and +1 on the superdiagonal.
Mat forward_difference(std::size_t n);

/// (H^x, H^y) = (hess_f_at(x), hess_g_at(y)).
std::pair<Mat, Mat> hessian_pair(const CompositeProblem& p, const Vec& x, const Vec& y);

}  // namespace happrs
