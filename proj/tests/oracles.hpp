#pragma once

// Reference computations for tests. Deliberately naive and independent of
// the library's factorizations and kernels.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "happrs/alf.hpp"
#include "happrs/core/dense.hpp"
#include "happrs/problem.hpp"

namespace oracle {

using happrs::Mat;
using happrs::Vec;

// Gaussian elimination with partial pivoting on a dense copy.
inline std::vector<double> gauss_solve(std::vector<std::vector<double>> m, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(m[r][c]) > std::fabs(m[piv][c])) piv = r;
    if (m[piv][c] == 0.0) throw std::runtime_error("singular system");
    std::swap(m[piv], m[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= m[i][k] * x[k];
    x[i] = s / m[i][i];
  }
  return x;
}

// KKT point of min 1/2|x - c_f|^2 + 1/2|y - c_g|^2 s.t. Ax = y under the
// Lagrangian f + g - lambda^T (Ax - y):
//   x - c_f - A^T lambda = 0,  y - c_g + lambda = 0,  Ax - y = 0.
inline happrs::Iterate quadratic_kkt(const Vec& c_f, const Vec& c_g, const Mat& a) {
  const std::size_t n1 = c_f.size(), n2 = c_g.size(), n = n1 + 2 * n2;
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  std::vector<double> b(n, 0.0);
  for (std::size_t i = 0; i < n1; ++i) {
    m[i][i] = 1.0;
    for (std::size_t j = 0; j < n2; ++j) m[i][n1 + n2 + j] = -a(j, i);
    b[i] = c_f[i];
  }
  for (std::size_t j = 0; j < n2; ++j) {
    m[n1 + j][n1 + j] = 1.0;
    m[n1 + j][n1 + n2 + j] = 1.0;
    b[n1 + j] = c_g[j];
  }
  for (std::size_t j = 0; j < n2; ++j) {
    for (std::size_t i = 0; i < n1; ++i) m[n1 + n2 + j][i] = a(j, i);
    m[n1 + n2 + j][n1 + j] = -1.0;
  }
  const auto z = gauss_solve(m, b);
  happrs::Iterate w{Vec(n1), Vec(n2), Vec(n2)};
  for (std::size_t i = 0; i < n1; ++i) w.x[i] = z[i];
  for (std::size_t j = 0; j < n2; ++j) {
    w.y[j] = z[n1 + j];
    w.lambda[j] = z[n1 + n2 + j];
  }
  return w;
}

// Central differences with a step scaled to the coordinate.
inline Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x) {
  Vec g(x.size());
  Vec p = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * std::max(1.0, std::fabs(x[i]));
    const double xi = p[i];
    p[i] = xi + h;
    const double fp = f(p);
    p[i] = xi - h;
    const double fm = f(p);
    p[i] = xi;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

inline double l2(const Vec& v) {
  double s = 0.0;
  for (double e : v) s += e * e;
  return std::sqrt(s);
}

inline double sup_diff(const Vec& a, const Vec& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

// |g - fd| / (1 + |g|), Euclidean.
inline double fd_rel_error(const Vec& g, const Vec& fd) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += (g[i] - fd[i]) * (g[i] - fd[i]);
  return std::sqrt(s) / (1.0 + l2(g));
}

inline double iterate_sup_diff(const happrs::Iterate& a, const happrs::Iterate& b) {
  return std::max({sup_diff(a.x, b.x), sup_diff(a.y, b.y), sup_diff(a.lambda, b.lambda)});
}

}  // namespace oracle
