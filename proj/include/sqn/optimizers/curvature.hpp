#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "sqn/numerics/matrix.hpp"
#include "sqn/numerics/vector.hpp"

namespace sqn {

/// Multiplication tally for the optimizer-side arithmetic (gradient
/// evaluations excluded).
struct OpCount {
  std::uint64_t mults = 0;
};

/// (v, r_hat) with rho_hat = 1 / (v^T r_hat) > 0.
struct CurvaturePair {
  Vector v;
  Vector r_hat;
  double rho_hat = 0.0;
};

/// Pairs with v^T r <= kCurvatureFloor * ||v|| ||r|| are rejected.
inline constexpr double kCurvatureFloor = 1e-12;

/// Returns nullopt when the curvature condition fails. Throws DimensionError
/// when the lengths differ.
std::optional<CurvaturePair> make_pair(Vector v, Vector r_hat, OpCount* ops = nullptr);

/// B^{-1} p for the limited-memory inverse built from `pairs` (oldest first)
/// on top of gamma * I. Costs (4k + 1) n multiplications for k pairs.
Vector two_loop(std::span<const CurvaturePair> pairs, double gamma_hat, const Vector& p, OpCount* ops = nullptr);

/// gamma = v^T r / ||r||^2, or nullopt when r is zero.
std::optional<double> olbfgs_gamma(const CurvaturePair& last);

/// In-place inverse BFGS update H <- Z^T H Z + rho v v^T, Z = I - rho r v^T,
/// done with rank-one passes in O(n^2).
void bfgs_inverse_update(Matrix& h, const CurvaturePair& pair, OpCount* ops = nullptr);

namespace testing_hooks {
/// Adds `relative` * ||q|| to the first component of every two_loop result.
/// Zero (the default) disables it. Used to check that the verify suite
/// detects a broken recursion.
void set_two_loop_perturbation(double relative);
double two_loop_perturbation();
}  // namespace testing_hooks

}  // namespace sqn
