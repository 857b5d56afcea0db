#pragma once

#include <cstddef>

#include "sqn/problems/problem.hpp"

namespace sqn {

/// How the diagonal of A is drawn.
struct DiagMode {
  enum class Kind { discrete, uniform01 };
  Kind kind = Kind::discrete;
  int xi = 0;  // discrete: a_ii uniform on {1, 1e-1, ..., 1e-xi}

  static DiagMode discrete(int xi) { return {Kind::discrete, xi}; }
  static DiagMode uniform01() { return {Kind::uniform01, 0}; }
};

/// f(w, theta) = 1/2 w^T (A + A diag(theta)) w + b^T w, theta ~ U[-theta0, theta0]^n,
/// with A diagonal and positive. F(w) = 1/2 w^T A w + b^T w.
class QuadraticProblem final : public StochasticProblem {
public:
  /// Throws InvalidArgument unless every a_ii > 0, theta0 in [0, 1) and sizes agree.
  QuadraticProblem(Vector a_diag, Vector b, double theta0);

  std::string_view name() const override { return "quadratic"; }
  std::size_t dim() const override { return a_.size(); }

  SampleBatch sample(Rng64& rng, std::size_t L) const override;
  Vector batch_grad(const Vector& w, const SampleBatch& batch) const override;
  double batch_value(const Vector& w, const SampleBatch& batch) const override;
  double expected_value(const Vector& w) const override;
  Vector expected_grad(const Vector& w) const override;

  /// w* = -A^{-1} b, the stationary point of F.
  std::optional<Vector> optimum() const override;
  /// m~ = min a_i (1 - theta0), M~ = max a_i (1 + theta0).
  std::optional<HessianBounds> hessian_bounds() const override;

  const Vector& a_diag() const noexcept { return a_; }
  const Vector& b() const noexcept { return b_; }
  double theta0() const noexcept { return theta0_; }
  double condition_number() const;

private:
  Vector mean_theta(const SampleBatch& batch) const;

  Vector a_;
  Vector b_;
  double theta0_;
};

/// Random instance: a_ii per `mode`, b ~ U[0,1]^n.
/// Throws InvalidArgument for n == 0, xi < 0 or theta0 outside [0, 1).
QuadraticProblem quadratic_new(std::size_t n, DiagMode mode, double theta0, Rng64& rng);

}  // namespace sqn
