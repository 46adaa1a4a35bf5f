#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "happrs/core/dense.hpp"

namespace happrs {

// Vector arithmetic. Binary operations require equal sizes
// (ErrorKind::DimensionMismatch otherwise).
double dot(const Vec& x, const Vec& y);
double norm2(const Vec& x);
double norm_inf(const Vec& x);
void axpy(double alpha, const Vec& x, Vec& y);
bool all_finite(const Vec& x);

Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator-(const Vec& a);
Vec operator*(double s, const Vec& a);
Vec& operator+=(Vec& a, const Vec& b);
Vec& operator-=(Vec& a, const Vec& b);

// Matrix helpers.
Vec matvec(const Mat& a, const Vec& x);    // A x
Vec matvec_t(const Mat& a, const Vec& x);  // A^T x
Mat gram(const Mat& a);                    // A^T A
Mat transpose(const Mat& a);
Mat operator+(const Mat& a, const Mat& b);
Mat operator*(double s, const Mat& a);
void add_identity(Mat& m, double c);
void add_rank1(Mat& m, double c, std::span<const double> a);  // m += c a a^T
double quad_form(const Mat& m, const Vec& x);                 // x^T M x
double max_abs(const Mat& m);
double asymmetry(const Mat& m);  // max |M_ij - M_ji|
bool all_finite(const Mat& m);

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
class Cholesky {
 public:
  /// Throws ErrorKind::NotPositiveDefinite on a nonpositive or non-finite pivot.
  explicit Cholesky(const Mat& m);

  /// Empty when the matrix is not numerically positive definite.
  static std::optional<Cholesky> try_factor(const Mat& m);

  Vec solve(const Vec& b) const;
  std::size_t dim() const noexcept { return l_.rows(); }
  const Mat& lower() const noexcept { return l_; }

 private:
  Cholesky() = default;
  bool factor(const Mat& m);

  Mat l_;
};

/// Solves M v = b for symmetric positive definite M.
/// Symmetry is checked to 1e-10 relative to max|M|.
Vec solve_spd(const Mat& m, const Vec& b);

struct EigenEstimate {
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// max |lambda(M)| for symmetric M, by power iteration.
EigenEstimate largest_abs_eigenvalue(const Mat& m, double tol = 1e-8, std::size_t max_iter = 10000);

/// lambda_min(M) for symmetric M, by power iteration on (c I - M) with
/// c = max |lambda(M)|.
EigenEstimate smallest_eigenvalue(const Mat& m, double tol = 1e-8, std::size_t max_iter = 10000);

/// lambda_min(M) for symmetric positive semidefinite M, by inverse iteration
/// on M + delta I with a small shift delta; handles singular M.
EigenEstimate smallest_eigenvalue_psd(const Mat& m, double tol = 1e-8, std::size_t max_iter = 10000);

}  // namespace happrs

namespace happrs {

// Upper-triangle variants for accumulating symmetric sums; call
// mirror_upper once after the last update.
void add_rank1_upper(Mat& m, double c, std::span<const double> a);
void mirror_upper(Mat& m);

}  // namespace happrs
