#include "happrs/core/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "happrs/core/error.hpp"
#include "happrs/core/kernels.hpp"
#include "happrs/core/rng.hpp"

namespace happrs {
namespace {

const simd::KernelTable& k() { return simd::active_kernels(); }

void check_same(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

Vec unit_start(std::size_t n) {
  Rng rng(0x5eed5eedULL);
  Vec v = normal_sample(rng, n);
  const double nv = norm2(v);
  for (auto& x : v) x /= nv;
  return v;
}

}  // namespace

double dot(const Vec& x, const Vec& y) {
  check_same(x.size(), y.size(), "dot");
  return k().dot(x.data(), y.data(), x.size());
}

double norm2(const Vec& x) { return std::sqrt(k().dot(x.data(), x.data(), x.size())); }

double norm_inf(const Vec& x) { return k().max_abs(x.data(), x.size()); }

void axpy(double alpha, const Vec& x, Vec& y) {
  check_same(x.size(), y.size(), "axpy");
  k().axpy(alpha, x.data(), y.data(), x.size());
}

bool all_finite(const Vec& x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

Vec operator+(const Vec& a, const Vec& b) {
  Vec out = a;
  out += b;
  return out;
}

Vec operator-(const Vec& a, const Vec& b) {
  Vec out = a;
  out -= b;
  return out;
}

Vec operator-(const Vec& a) {
  Vec out = a;
  for (auto& v : out) v = -v;
  return out;
}

Vec operator*(double s, const Vec& a) {
  Vec out = a;
  for (auto& v : out) v *= s;
  return out;
}

Vec& operator+=(Vec& a, const Vec& b) {
  axpy(1.0, b, a);
  return a;
}

Vec& operator-=(Vec& a, const Vec& b) {
  axpy(-1.0, b, a);
  return a;
}

Mat::Mat(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  a_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    check_same(r.size(), cols_, "Mat row length");
    a_.insert(a_.end(), r.begin(), r.end());
  }
}

Mat Mat::identity(std::size_t n, double scale) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = scale;
  return m;
}

Mat Mat::diagonal(const Vec& d) {
  Mat m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Mat Mat::from_row_major(std::size_t rows, std::size_t cols, std::vector<double> values) {
  check_same(values.size(), rows * cols, "Mat::from_row_major");
  Mat m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.a_ = std::move(values);
  return m;
}

Vec matvec(const Mat& a, const Vec& x) {
  check_same(a.cols(), x.size(), "matvec");
  Vec y(a.rows());
  k().gemv(a.data(), a.rows(), a.cols(), x.data(), y.data());
  return y;
}

Vec matvec_t(const Mat& a, const Vec& x) {
  check_same(a.rows(), x.size(), "matvec_t");
  Vec y(a.cols());
  k().gemv_t(a.data(), a.rows(), a.cols(), x.data(), y.data());
  return y;
}

void add_rank1(Mat& m, double c, std::span<const double> a) {
  check_same(m.rows(), a.size(), "add_rank1");
  check_same(m.cols(), a.size(), "add_rank1");
  for (std::size_t p = 0; p < a.size(); ++p) {
    k().axpy(c * a[p], a.data(), m.row(p).data(), a.size());
  }
}

void add_rank1_upper(Mat& m, double c, std::span<const double> a) {
  check_same(m.rows(), a.size(), "add_rank1_upper");
  check_same(m.cols(), a.size(), "add_rank1_upper");
  const std::size_t n = a.size();
  for (std::size_t p = 0; p < n; ++p) {
    const double s = c * a[p];
    if (s == 0.0) continue;
    k().axpy(s, a.data() + p, m.row(p).data() + p, n - p);
  }
}

void mirror_upper(Mat& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < i; ++j) m(i, j) = m(j, i);
  }
}

Mat gram(const Mat& a) {
  Mat g(a.cols(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) add_rank1_upper(g, 1.0, a.row(i));
  mirror_upper(g);
  return g;
}

Mat transpose(const Mat& a) {
  Mat t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  }
  return t;
}

Mat operator+(const Mat& a, const Mat& b) {
  check_same(a.rows(), b.rows(), "Mat +");
  check_same(a.cols(), b.cols(), "Mat +");
  Mat out = a;
  k().axpy(1.0, b.data(), out.data(), a.rows() * a.cols());
  return out;
}

Mat operator*(double s, const Mat& a) {
  Mat out = a;
  double* p = out.data();
  for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) p[i] *= s;
  return out;
}

void add_identity(Mat& m, double c) {
  check_same(m.rows(), m.cols(), "add_identity");
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) += c;
}

double quad_form(const Mat& m, const Vec& x) {
  check_same(m.rows(), m.cols(), "quad_form");
  return dot(x, matvec(m, x));
}

double max_abs(const Mat& m) { return k().max_abs(m.data(), m.rows() * m.cols()); }

double asymmetry(const Mat& m) {
  if (!m.square()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      worst = std::max(worst, std::fabs(m(i, j) - m(j, i)));
    }
  }
  return worst;
}

bool all_finite(const Mat& m) {
  return std::all_of(m.values().begin(), m.values().end(),
                     [](double v) { return std::isfinite(v); });
}

Cholesky::Cholesky(const Mat& m) {
  if (!factor(m)) throw Error(ErrorKind::NotPositiveDefinite, "Cholesky pivot is not positive");
}

std::optional<Cholesky> Cholesky::try_factor(const Mat& m) {
  Cholesky c;
  if (!c.factor(m)) return std::nullopt;
  return c;
}

bool Cholesky::factor(const Mat& m) {
  check_same(m.rows(), m.cols(), "Cholesky");
  const std::size_t n = m.rows();
  l_ = Mat(n, n);
  const auto& kt = k();
  for (std::size_t j = 0; j < n; ++j) {
    const double* lj = l_.row(j).data();
    const double pivot = m(j, j) - kt.dot(lj, lj, j);
    if (!(pivot > 0.0) || !std::isfinite(pivot)) return false;
    const double d = std::sqrt(pivot);
    l_(j, j) = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      double* li = l_.row(i).data();
      li[j] = (m(i, j) - kt.dot(li, lj, j)) / d;
    }
  }
  return true;
}

Vec Cholesky::solve(const Vec& b) const {
  check_same(dim(), b.size(), "Cholesky::solve");
  const std::size_t n = dim();
  const auto& kt = k();
  Vec x = b;
  for (std::size_t i = 0; i < n; ++i) {
    const double* li = l_.row(i).data();
    x[i] = (x[i] - kt.dot(li, x.data(), i)) / li[i];
  }
  for (std::size_t i = n; i-- > 0;) {
    const double* li = l_.row(i).data();
    x[i] /= li[i];
    kt.axpy(-x[i], li, x.data(), i);
  }
  return x;
}

Vec solve_spd(const Mat& m, const Vec& b) {
  check_same(m.rows(), m.cols(), "solve_spd (square)");
  check_same(m.rows(), b.size(), "solve_spd");
  require(asymmetry(m) <= 1e-10 * std::max(1.0, max_abs(m)), ErrorKind::InvalidArgument,
          "solve_spd needs a symmetric matrix");
  return Cholesky(m).solve(b);
}

EigenEstimate largest_abs_eigenvalue(const Mat& m, double tol, std::size_t max_iter) {
  check_same(m.rows(), m.cols(), "largest_abs_eigenvalue");
  EigenEstimate est;
  if (m.rows() == 0) return {0.0, 0, true};
  Vec v = unit_start(m.rows());
  double prev = 0.0;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    Vec w = matvec(m, v);
    const double nw = norm2(w);
    est.iterations = it;
    est.value = nw;
    if (nw == 0.0) {
      est.converged = true;
      return est;
    }
    for (std::size_t i = 0; i < w.size(); ++i) v[i] = w[i] / nw;
    if (std::fabs(nw - prev) <= tol * nw) {
      est.converged = true;
      return est;
    }
    prev = nw;
  }
  return est;
}

EigenEstimate smallest_eigenvalue(const Mat& m, double tol, std::size_t max_iter) {
  const EigenEstimate top = largest_abs_eigenvalue(m, tol, max_iter);
  const double c = top.value;
  if (c == 0.0) return {0.0, top.iterations, top.converged};
  // c I - M is positive semidefinite; its top eigenvalue is c - lambda_min(M).
  Mat shifted = -1.0 * m;
  add_identity(shifted, c);
  Vec v = unit_start(m.rows());
  double prev = std::numeric_limits<double>::infinity();
  EigenEstimate est;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    Vec w = matvec(shifted, v);
    const double rq = dot(v, w);
    const double nw = norm2(w);
    est.iterations = it;
    est.value = c - rq;
    if (nw == 0.0) {
      est.value = c;
      est.converged = true;
      return est;
    }
    for (std::size_t i = 0; i < w.size(); ++i) v[i] = w[i] / nw;
    if (std::fabs(rq - prev) <= tol * std::max(1.0, c)) {
      est.converged = true;
      return est;
    }
    prev = rq;
  }
  return est;
}

EigenEstimate smallest_eigenvalue_psd(const Mat& m, double tol, std::size_t max_iter) {
  const EigenEstimate top = largest_abs_eigenvalue(m, tol, max_iter);
  const double scale = std::max(1.0, top.value);
  if (top.value == 0.0) return {0.0, top.iterations, true};
  Mat shifted = m;
  const double delta = 1e-7 * scale;
  add_identity(shifted, delta);
  const Cholesky chol(shifted);
  Vec v = unit_start(m.rows());
  double prev = std::numeric_limits<double>::infinity();
  EigenEstimate est;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    Vec w = chol.solve(v);
    const double nw = norm2(w);
    for (std::size_t i = 0; i < w.size(); ++i) v[i] = w[i] / nw;
    const double rq = quad_form(m, v);
    est.iterations = it;
    est.value = std::max(0.0, rq);
    if (std::fabs(rq - prev) <= tol * scale) {
      est.converged = true;
      return est;
    }
    prev = rq;
  }
  return est;
}

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::UnknownLipschitz: return "UnknownLipschitz";
    case ErrorKind::ProximalNotPD: return "ProximalNotPD";
    case ErrorKind::LineSearchFailed: return "LineSearchFailed";
    case ErrorKind::NumericalError: return "NumericalError";
    case ErrorKind::NonPositiveEta1: return "NonPositiveEta1";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Config: return "Config";
  }
  return "Unknown";
}

}  // namespace happrs
