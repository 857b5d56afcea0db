#include "sqn/optimizers/curvature.hpp"

#include <atomic>
#include <cmath>
#include <vector>

#include "sqn/errors.hpp"

namespace sqn {
namespace {

std::atomic<double> g_two_loop_perturbation{0.0};

}  // namespace

namespace testing_hooks {
void set_two_loop_perturbation(double relative) { g_two_loop_perturbation.store(relative); }
double two_loop_perturbation() { return g_two_loop_perturbation.load(); }
}  // namespace testing_hooks

std::optional<CurvaturePair> make_pair(Vector v, Vector r_hat, OpCount* ops) {
  if (v.size() != r_hat.size()) throw DimensionError("make_pair: v and r_hat lengths differ");
  const double vr = dot(v, r_hat);
  const double vv = norm_sq(v);
  const double rr = norm_sq(r_hat);
  if (ops) ops->mults += 3 * v.size();
  if (!(vr > kCurvatureFloor * std::sqrt(vv * rr)) || !std::isfinite(vr)) return std::nullopt;
  return CurvaturePair{std::move(v), std::move(r_hat), 1.0 / vr};
}

Vector two_loop(std::span<const CurvaturePair> pairs, double gamma_hat, const Vector& p, OpCount* ops) {
  const std::size_t k = pairs.size();
  const std::size_t n = p.size();
  for (const auto& pr : pairs)
    if (pr.v.size() != n || pr.r_hat.size() != n) throw DimensionError("two_loop: pair dimension mismatch");

  // alpha[j] belongs to pairs[j]; the first loop walks newest to oldest.
  std::vector<double> alpha(k);
  Vector q = p;
  for (std::size_t j = k; j-- > 0;) {
    const CurvaturePair& pr = pairs[j];
    alpha[j] = pr.rho_hat * dot(pr.v, q);
    axpy(-alpha[j], pr.r_hat, q);
  }
  scale(gamma_hat, q);
  for (std::size_t j = 0; j < k; ++j) {
    const CurvaturePair& pr = pairs[j];
    const double beta = pr.rho_hat * dot(pr.r_hat, q);
    axpy(alpha[j] - beta, pr.v, q);
  }
  if (ops) ops->mults += (4 * k + 1) * n;

  if (const double eps = testing_hooks::two_loop_perturbation(); eps != 0.0 && n > 0) q[0] += eps * norm(q);
  return q;
}

std::optional<double> olbfgs_gamma(const CurvaturePair& last) {
  const double rr = norm_sq(last.r_hat);
  if (rr == 0.0) return std::nullopt;
  return dot(last.v, last.r_hat) / rr;
}

void bfgs_inverse_update(Matrix& h, const CurvaturePair& pair, OpCount* ops) {
  // Z^T H Z + rho v v^T with Z = I - rho r v^T expands to
  // H - rho (v (Hr)^T + (Hr) v^T) + (rho^2 r^T H r + rho) v v^T.
  const std::size_t n = h.size();
  if (pair.v.size() != n) throw DimensionError("bfgs_inverse_update: dimension mismatch");
  const Vector hr = [&] {
    // H is symmetric, so H r is also r^T H.
    Vector out(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += h(i, j) * pair.r_hat[j];
      out[i] = s;
    }
    return out;
  }();
  const double rho = pair.rho_hat;
  const double rhr = dot(pair.r_hat, hr);
  const double c = rho * rho * rhr + rho;
  Vector a = -rho * pair.v;
  Vector cv = c * pair.v;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) += a[i] * hr[j] + hr[i] * a[j] + cv[i] * pair.v[j];
  if (ops) ops->mults += 4 * n * n + 3 * n;
}

}  // namespace sqn
