#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace happrs {

/// Dense real vector. Owns its storage; arithmetic lives in linalg.hpp.
class Vec {
 public:
  Vec() = default;
  explicit Vec(std::size_t n, double value = 0.0) : v_(n, value) {}
  Vec(std::initializer_list<double> init) : v_(init) {}
  explicit Vec(std::vector<double> values) : v_(std::move(values)) {}

  std::size_t size() const noexcept { return v_.size(); }
  bool empty() const noexcept { return v_.empty(); }

  double* data() noexcept { return v_.data(); }
  const double* data() const noexcept { return v_.data(); }

  double& operator[](std::size_t i) { return v_[i]; }
  double operator[](std::size_t i) const { return v_[i]; }

  auto begin() noexcept { return v_.begin(); }
  auto end() noexcept { return v_.end(); }
  auto begin() const noexcept { return v_.begin(); }
  auto end() const noexcept { return v_.end(); }

  std::span<double> span() noexcept { return v_; }
  std::span<const double> span() const noexcept { return v_; }
  const std::vector<double>& values() const noexcept { return v_; }

  friend bool operator==(const Vec&, const Vec&) = default;

 private:
  std::vector<double> v_;
};

/// Dense row-major matrix.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, double value = 0.0)
      : rows_(rows), cols_(cols), a_(rows * cols, value) {}
  Mat(std::initializer_list<std::initializer_list<double>> rows);

  static Mat identity(std::size_t n, double scale = 1.0);
  static Mat diagonal(const Vec& d);
  static Mat from_row_major(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {a_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept { return {a_.data() + i * cols_, cols_}; }

  double* data() noexcept { return a_.data(); }
  const double* data() const noexcept { return a_.data(); }
  const std::vector<double>& values() const noexcept { return a_; }

  friend bool operator==(const Mat&, const Mat&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> a_;
};

}  // namespace happrs
