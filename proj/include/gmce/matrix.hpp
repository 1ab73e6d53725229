#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace gmce {

/// Dense row-major matrix of doubles. Used for fields, periodograms and lag tables.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Symmetric-friendly 2x2 matrix with the closed-form operations the
/// asymptotic covariance needs.
struct Mat2 {
  std::array<std::array<double, 2>, 2> m{};

  double& operator()(std::size_t i, std::size_t j) noexcept { return m[i][j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return m[i][j]; }

  double det() const noexcept { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
  double trace() const noexcept { return m[0][0] + m[1][1]; }

  Mat2 transpose() const noexcept {
    Mat2 t;
    t.m = {{{m[0][0], m[1][0]}, {m[0][1], m[1][1]}}};
    return t;
  }

  /// Eigenvalues of the symmetric part, ascending.
  std::array<double, 2> symmetric_eigenvalues() const noexcept;

  /// Ratio of largest to smallest absolute eigenvalue of the symmetric part.
  double condition_number() const noexcept;

  /// Closed-form inverse. Throws std::domain_error when |det| is below
  /// `det_floor` times the squared Frobenius norm.
  Mat2 inverse(double det_floor = 1e-300) const;

  friend Mat2 operator*(const Mat2& a, const Mat2& b) noexcept {
    Mat2 c;
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) c.m[i][j] = a.m[i][0] * b.m[0][j] + a.m[i][1] * b.m[1][j];
    return c;
  }
  friend Mat2 operator*(double s, const Mat2& a) noexcept {
    Mat2 c = a;
    for (auto& r : c.m)
      for (auto& v : r) v *= s;
    return c;
  }
  friend Mat2 operator+(const Mat2& a, const Mat2& b) noexcept {
    Mat2 c;
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) c.m[i][j] = a.m[i][j] + b.m[i][j];
    return c;
  }
  friend Mat2 operator-(const Mat2& a, const Mat2& b) noexcept { return a + (-1.0) * b; }
};

}  // namespace gmce
