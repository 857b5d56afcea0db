#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "sqn/numerics/rng.hpp"
#include "sqn/numerics/vector.hpp"

namespace sqn {

/// L independent draws of the random parameter. Quadratic problems fill
/// `thetas` (L rows of length n, row-major); datasets fill `indices`.
struct SampleBatch {
  std::size_t count = 0;
  std::vector<double> thetas;
  std::vector<std::size_t> indices;
};

/// m_tilde, M_tilde bound the eigenvalues of every instantaneous Hessian;
/// m, M those of the Hessian of F.
struct HessianBounds {
  double m_tilde = 0.0;
  double M_tilde = 0.0;
  double m = 0.0;
  double M = 0.0;
};

/// Finite-sum view used by SAG: F(w) = sum_i weight(i) f_i(w) with weights summing to one.
class FiniteSum {
public:
  virtual ~FiniteSum() = default;
  virtual std::size_t num_samples() const = 0;
  virtual double weight(std::size_t i) const = 0;
  virtual Vector sample_grad(const Vector& w, std::size_t i) const = 0;
};

/// F(w) = E_theta[f(w, theta)] with a sampler for theta.
class StochasticProblem {
public:
  virtual ~StochasticProblem() = default;

  virtual std::string_view name() const = 0;
  virtual std::size_t dim() const = 0;

  /// Throws InvalidArgument when L == 0.
  virtual SampleBatch sample(Rng64& rng, std::size_t L) const = 0;

  /// Average of the per-sample gradients over the batch.
  virtual Vector batch_grad(const Vector& w, const SampleBatch& batch) const = 0;
  virtual double batch_value(const Vector& w, const SampleBatch& batch) const = 0;

  virtual double expected_value(const Vector& w) const = 0;
  virtual Vector expected_grad(const Vector& w) const = 0;

  /// Exact minimizer when available in closed form.
  virtual std::optional<Vector> optimum() const { return std::nullopt; }
  virtual std::optional<HessianBounds> hessian_bounds() const { return std::nullopt; }
  /// Non-null for problems with finite support.
  virtual const FiniteSum* finite_sum() const { return nullptr; }

protected:
  void check_dim(const Vector& w) const;
  static void check_batch_size(std::size_t L);
};

}  // namespace sqn
