#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace sqn {

/// Fixed-length dense vector of doubles. Length is set at construction.
class Vector {
public:
  Vector() = default;
  explicit Vector(std::size_t n, double fill = 0.0) : data_(n, fill) {}
  Vector(std::initializer_list<double> values) : data_(values) {}
  explicit Vector(std::vector<double> values) : data_(std::move(values)) {}

  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator[](std::size_t i) noexcept { return data_[i]; }
  double operator[](std::size_t i) const noexcept { return data_[i]; }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }

  std::span<double> span() noexcept { return data_; }
  std::span<const double> span() const noexcept { return data_; }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  const std::vector<double>& values() const noexcept { return data_; }

  friend bool operator==(const Vector&, const Vector&) = default;

private:
  std::vector<double> data_;
};

double dot(const Vector& x, const Vector& y);
double norm(const Vector& x);
double norm_sq(const Vector& x);
double norm_inf(const Vector& x);

// y += alpha * x
void axpy(double alpha, const Vector& x, Vector& y);
void scale(double alpha, Vector& x);

Vector operator+(const Vector& x, const Vector& y);
Vector operator-(const Vector& x, const Vector& y);
Vector operator*(double alpha, const Vector& x);

bool all_finite(const Vector& x);

}  // namespace sqn
