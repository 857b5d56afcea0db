#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "sqn/numerics/matrix.hpp"
#include "sqn/numerics/vector.hpp"
#include "sqn/optimizers/curvature.hpp"

namespace sqn {

/// All oracles are n x n and throw DimensionError when a pair has another length.

/// Explicit limited-memory inverse: H <- Z^T H Z + rho v v^T per pair
/// (oldest first), Z = I - rho r v^T, from H0 = gamma I. Dense O(k n^3).
Matrix dense_lbfgs_oracle(std::span<const CurvaturePair> pairs, double gamma_hat, std::size_t n);

/// Same matrix from the expanded product form
/// H = (Z_k..Z_1)^T gamma (Z_1..Z_k) + sum_j (Z_{j+1}..Z_k)^T rho_j v_j v_j^T (Z_{j+1}..Z_k).
Matrix dense_lbfgs_expanded(std::span<const CurvaturePair> pairs, double gamma_hat, std::size_t n);

/// Direct recursion B <- B - B v v^T B / v^T B v + r r^T / v^T r from B0 = I / gamma.
/// Throws NotSpdError when v^T B v <= 0 along the way.
Matrix dense_hessian_oracle(std::span<const CurvaturePair> pairs, double gamma_hat, std::size_t n);

/// Central differences, one coordinate at a time.
Vector finite_diff_grad(const std::function<double(const Vector&)>& value_fn, const Vector& w, double h);

}  // namespace sqn
