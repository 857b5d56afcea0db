#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "sqn/numerics/vector.hpp"

namespace sqn {

/// Square dense matrix, row-major storage.
class Matrix {
public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n, double scale = 1.0);
  static Matrix diagonal(const Vector& d);
  static Matrix outer(const Vector& x, const Vector& y);

  std::size_t size() const noexcept { return n_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }

  Matrix transposed() const;
  double max_abs() const;
  double asymmetry() const;  // max |M_ij - M_ji|

  friend bool operator==(const Matrix&, const Matrix&) = default;

private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double alpha, const Matrix& a);
Matrix operator*(const Matrix& a, const Matrix& b);

}  // namespace sqn
