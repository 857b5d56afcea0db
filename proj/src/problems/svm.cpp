#include "sqn/problems/svm.hpp"

#include <algorithm>
#include <string>

#include "sqn/errors.hpp"

namespace sqn {

SvmDataset::SvmDataset(std::size_t n, std::vector<double> features, std::vector<int> labels, double lambda)
    : n_(n), features_(std::move(features)), labels_(std::move(labels)), lambda_(lambda) {
  if (n_ == 0) throw InvalidArgument("svm: feature dimension must be at least 1");
  if (labels_.empty()) throw InvalidArgument("svm: empty training set");
  if (features_.size() != labels_.size() * n_) throw InvalidArgument("svm: features are not N x n");
  if (!(lambda_ >= 0.0)) throw InvalidArgument("svm: lambda must be non-negative");
  for (int y : labels_)
    if (y != 1 && y != -1) throw InvalidArgument("svm: labels must be +1 or -1");
}

double SvmDataset::margin(const Vector& w, std::size_t i) const {
  const double* x = row(i);
  double s = 0.0;
  for (std::size_t j = 0; j < n_; ++j) s += x[j] * w[j];
  return 1.0 - labels_[i] * s;
}

void SvmDataset::add_row(double coeff, std::size_t i, Vector& g) const {
  const double* x = row(i);
  for (std::size_t j = 0; j < n_; ++j) g[j] += coeff * x[j];
}

SampleBatch SvmDataset::sample(Rng64& rng, std::size_t L) const {
  check_batch_size(L);
  SampleBatch batch;
  batch.count = L;
  batch.indices.resize(L);
  for (auto& idx : batch.indices) idx = rng.uniform_index(labels_.size());
  return batch;
}

Vector SvmDataset::batch_grad(const Vector& w, const SampleBatch& batch) const {
  check_dim(w);
  if (batch.indices.empty()) throw DimensionError("svm: empty batch");
  Vector g = lambda_ * w;
  const double inv_l = 1.0 / static_cast<double>(batch.indices.size());
  for (std::size_t i : batch.indices) {
    const double h = margin(w, i);
    if (h > 0.0) add_row(-2.0 * inv_l * labels_[i] * h, i, g);
  }
  return g;
}

double SvmDataset::batch_value(const Vector& w, const SampleBatch& batch) const {
  check_dim(w);
  if (batch.indices.empty()) throw DimensionError("svm: empty batch");
  double loss = 0.0;
  for (std::size_t i : batch.indices) {
    const double h = std::max(0.0, margin(w, i));
    loss += h * h;
  }
  return 0.5 * lambda_ * norm_sq(w) + loss / static_cast<double>(batch.indices.size());
}

double SvmDataset::expected_value(const Vector& w) const {
  check_dim(w);
  double loss = 0.0;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    const double h = std::max(0.0, margin(w, i));
    loss += h * h;
  }
  return 0.5 * lambda_ * norm_sq(w) + loss / static_cast<double>(labels_.size());
}

Vector SvmDataset::expected_grad(const Vector& w) const {
  check_dim(w);
  Vector g = lambda_ * w;
  const double inv_n = 1.0 / static_cast<double>(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    const double h = margin(w, i);
    if (h > 0.0) add_row(-2.0 * inv_n * labels_[i] * h, i, g);
  }
  return g;
}

Vector SvmDataset::sample_grad(const Vector& w, std::size_t i) const {
  check_dim(w);
  Vector g = lambda_ * w;
  const double h = margin(w, i);
  if (h > 0.0) add_row(-2.0 * labels_[i] * h, i, g);
  return g;
}

SvmDataset svm_synthetic(std::size_t n, std::size_t N, Rng64& rng, double lambda) {
  if (N == 0 || N % 2 != 0) throw InvalidArgument("svm_synthetic: N must be even and positive, got " + std::to_string(N));
  std::vector<double> features(N * n);
  std::vector<int> labels(N);
  for (std::size_t i = 0; i < N; ++i) {
    const bool positive = i >= N / 2;
    labels[i] = positive ? 1 : -1;
    const double lo = positive ? -0.2 : -0.8;
    for (std::size_t j = 0; j < n; ++j) features[i * n + j] = rng.uniform(lo, lo + 1.0);
  }
  return SvmDataset(n, std::move(features), std::move(labels), lambda);
}

}  // namespace sqn
