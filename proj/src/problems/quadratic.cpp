#include "sqn/problems/quadratic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sqn/errors.hpp"

namespace sqn {

QuadraticProblem::QuadraticProblem(Vector a_diag, Vector b, double theta0)
    : a_(std::move(a_diag)), b_(std::move(b)), theta0_(theta0) {
  if (a_.empty()) throw InvalidArgument("quadratic: dimension must be at least 1");
  if (a_.size() != b_.size()) throw InvalidArgument("quadratic: a_diag and b lengths differ");
  if (!(theta0_ >= 0.0 && theta0_ < 1.0)) {
    throw InvalidArgument("quadratic: theta0 must lie in [0, 1), got " + std::to_string(theta0_));
  }
  for (double a : a_)
    if (!(a > 0.0)) throw InvalidArgument("quadratic: diagonal of A must be positive");
}

SampleBatch QuadraticProblem::sample(Rng64& rng, std::size_t L) const {
  check_batch_size(L);
  SampleBatch batch;
  batch.count = L;
  batch.thetas.resize(L * dim());
  for (double& t : batch.thetas) t = theta0_ == 0.0 ? 0.0 : rng.uniform(-theta0_, theta0_);
  return batch;
}

Vector QuadraticProblem::mean_theta(const SampleBatch& batch) const {
  const std::size_t n = dim();
  if (batch.count == 0 || batch.thetas.size() != batch.count * n) {
    throw DimensionError("quadratic: batch does not hold L theta vectors of length n");
  }
  Vector mean(n);
  for (std::size_t l = 0; l < batch.count; ++l)
    for (std::size_t i = 0; i < n; ++i) mean[i] += batch.thetas[l * n + i];
  scale(1.0 / static_cast<double>(batch.count), mean);
  return mean;
}

// Both the gradient and the value are affine in theta, so averaging over the
// batch reduces to evaluating at the mean theta.
Vector QuadraticProblem::batch_grad(const Vector& w, const SampleBatch& batch) const {
  check_dim(w);
  const Vector theta = mean_theta(batch);
  Vector g(dim());
  for (std::size_t i = 0; i < dim(); ++i) g[i] = a_[i] * (1.0 + theta[i]) * w[i] + b_[i];
  return g;
}

double QuadraticProblem::batch_value(const Vector& w, const SampleBatch& batch) const {
  check_dim(w);
  const Vector theta = mean_theta(batch);
  double v = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) v += 0.5 * a_[i] * (1.0 + theta[i]) * w[i] * w[i] + b_[i] * w[i];
  return v;
}

double QuadraticProblem::expected_value(const Vector& w) const {
  check_dim(w);
  double v = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) v += 0.5 * a_[i] * w[i] * w[i] + b_[i] * w[i];
  return v;
}

Vector QuadraticProblem::expected_grad(const Vector& w) const {
  check_dim(w);
  Vector g(dim());
  for (std::size_t i = 0; i < dim(); ++i) g[i] = a_[i] * w[i] + b_[i];
  return g;
}

std::optional<Vector> QuadraticProblem::optimum() const {
  Vector w(dim());
  for (std::size_t i = 0; i < dim(); ++i) w[i] = -b_[i] / a_[i];
  return w;
}

std::optional<HessianBounds> QuadraticProblem::hessian_bounds() const {
  const auto [lo, hi] = std::minmax_element(a_.begin(), a_.end());
  return HessianBounds{*lo * (1.0 - theta0_), *hi * (1.0 + theta0_), *lo, *hi};
}

double QuadraticProblem::condition_number() const {
  const auto [lo, hi] = std::minmax_element(a_.begin(), a_.end());
  return *hi / *lo;
}

QuadraticProblem quadratic_new(std::size_t n, DiagMode mode, double theta0, Rng64& rng) {
  if (n == 0) throw InvalidArgument("quadratic: n must be at least 1");
  if (!(theta0 >= 0.0 && theta0 < 1.0)) {
    throw InvalidArgument("quadratic: theta0 must lie in [0, 1), got " + std::to_string(theta0));
  }
  if (mode.kind == DiagMode::Kind::discrete && mode.xi < 0) throw InvalidArgument("quadratic: xi must be >= 0");

  Vector a(n);
  for (double& ai : a) {
    if (mode.kind == DiagMode::Kind::discrete) {
      const auto k = rng.uniform_index(static_cast<std::size_t>(mode.xi) + 1);
      ai = std::pow(10.0, -static_cast<double>(k));
    } else {
      ai = 1.0 - rng.uniform();  // (0, 1]
    }
  }
  Vector b(n);
  for (double& bi : b) bi = rng.uniform();
  return QuadraticProblem(std::move(a), std::move(b), theta0);
}

}  // namespace sqn
