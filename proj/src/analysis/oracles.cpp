#include "sqn/analysis/oracles.hpp"

#include <vector>

#include "sqn/errors.hpp"
#include "sqn/numerics/linalg.hpp"

namespace sqn {
namespace {

// Z = I - rho r v^T
Matrix z_factor(const CurvaturePair& pr) {
  return Matrix::identity(pr.v.size()) - pr.rho_hat * Matrix::outer(pr.r_hat, pr.v);
}

void check_pairs(std::span<const CurvaturePair> pairs, std::size_t n) {
  for (const auto& pr : pairs)
    if (pr.v.size() != n || pr.r_hat.size() != n) throw DimensionError("oracle: pair dimension mismatch");
}

}  // namespace

Matrix dense_lbfgs_oracle(std::span<const CurvaturePair> pairs, double gamma_hat, std::size_t n) {
  check_pairs(pairs, n);
  Matrix h = Matrix::identity(n, gamma_hat);
  for (const auto& pr : pairs) {
    const Matrix z = z_factor(pr);
    h = z.transposed() * h * z + pr.rho_hat * Matrix::outer(pr.v, pr.v);
  }
  return h;
}

Matrix dense_lbfgs_expanded(std::span<const CurvaturePair> pairs, double gamma_hat, std::size_t n) {
  check_pairs(pairs, n);
  const std::size_t k = pairs.size();
  // tail[j] = Z_j Z_{j+1} ... Z_{k-1} (0-based), tail[k] = I.
  std::vector<Matrix> tail(k + 1, Matrix::identity(n));
  for (std::size_t j = k; j-- > 0;) tail[j] = z_factor(pairs[j]) * tail[j + 1];

  Matrix h = gamma_hat * (tail[0].transposed() * tail[0]);
  for (std::size_t j = 0; j < k; ++j) {
    const Vector u = mat_vec(tail[j + 1].transposed(), pairs[j].v);
    h = h + pairs[j].rho_hat * Matrix::outer(u, u);
  }
  return h;
}

Matrix dense_hessian_oracle(std::span<const CurvaturePair> pairs, double gamma_hat, std::size_t n) {
  check_pairs(pairs, n);
  Matrix b = Matrix::identity(n, 1.0 / gamma_hat);
  for (const auto& pr : pairs) {
    const Vector bv = mat_vec(b, pr.v);
    const double vbv = dot(pr.v, bv);
    if (!(vbv > 0.0)) throw NotSpdError("dense_hessian_oracle: v^T B v <= 0");
    b = b - (1.0 / vbv) * Matrix::outer(bv, bv) + pr.rho_hat * Matrix::outer(pr.r_hat, pr.r_hat);
  }
  return b;
}

Vector finite_diff_grad(const std::function<double(const Vector&)>& value_fn, const Vector& w, double h) {
  if (!(h > 0.0)) throw InvalidArgument("finite_diff_grad: h must be positive");
  Vector g(w.size());
  Vector x = w;
  for (std::size_t i = 0; i < w.size(); ++i) {
    x[i] = w[i] + h;
    const double up = value_fn(x);
    x[i] = w[i] - h;
    const double down = value_fn(x);
    x[i] = w[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

}  // namespace sqn
