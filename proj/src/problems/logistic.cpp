#include "sqn/problems/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sqn/errors.hpp"

namespace sqn {

double logistic_sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

void SparseBinaryRows::add_row(std::vector<std::size_t> cols) {
  for (std::size_t c : cols)
    if (c >= n) throw InvalidArgument("sparse row: column " + std::to_string(c) + " out of range");
  columns.insert(columns.end(), cols.begin(), cols.end());
  offsets.push_back(columns.size());
}

double SparseBinaryRows::dot(std::size_t i, const Vector& w) const {
  double s = 0.0;
  for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) s += w[columns[k]];
  return s;
}

void SparseBinaryRows::add_to(double coeff, std::size_t i, Vector& g) const {
  for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) g[columns[k]] += coeff;
}

LogisticDataset::LogisticDataset(SparseBinaryRows rows, std::vector<int> labels, double lambda, double gamma)
    : rows_(std::move(rows)), labels_(std::move(labels)), lambda_(lambda), gamma_(gamma) {
  if (rows_.n == 0) throw InvalidArgument("logistic: feature dimension must be at least 1");
  if (labels_.empty()) throw InvalidArgument("logistic: empty training set");
  if (rows_.rows() != labels_.size()) throw InvalidArgument("logistic: row and label counts differ");
  if (!(gamma_ >= 1.0)) throw InvalidArgument("logistic: gamma weight must be >= 1");
  if (!(lambda_ >= 0.0)) throw InvalidArgument("logistic: lambda must be non-negative");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == 1) {
      positives_.push_back(i);
    } else if (labels_[i] == -1) {
      negatives_.push_back(i);
    } else {
      throw InvalidArgument("logistic: labels must be +1 or -1");
    }
  }
}

double LogisticDataset::positive_fraction() const {
  return static_cast<double>(positives_.size()) / static_cast<double>(labels_.size());
}

double LogisticDataset::weight(std::size_t i) const {
  const double total = gamma_ * static_cast<double>(positives_.size()) + static_cast<double>(negatives_.size());
  return (labels_[i] == 1 ? gamma_ : 1.0) / total;
}

std::size_t LogisticDataset::draw_index(Rng64& rng) const {
  const double pos_mass = gamma_ * static_cast<double>(positives_.size());
  const double p_positive = pos_mass / (pos_mass + static_cast<double>(negatives_.size()));
  if (rng.uniform() < p_positive) return positives_[rng.uniform_index(positives_.size())];
  return negatives_[rng.uniform_index(negatives_.size())];
}

SampleBatch LogisticDataset::sample(Rng64& rng, std::size_t L) const {
  check_batch_size(L);
  SampleBatch batch;
  batch.count = L;
  batch.indices.resize(L);
  for (auto& idx : batch.indices) idx = draw_index(rng);
  return batch;
}

Vector LogisticDataset::batch_grad(const Vector& w, const SampleBatch& batch) const {
  check_dim(w);
  if (batch.indices.empty()) throw DimensionError("logistic: empty batch");
  Vector g = lambda_ * w;
  const double inv_l = 1.0 / static_cast<double>(batch.indices.size());
  for (std::size_t i : batch.indices) {
    const double y = labels_[i];
    rows_.add_to(-inv_l * y * logistic_sigmoid(-y * rows_.dot(i, w)), i, g);
  }
  return g;
}

double LogisticDataset::batch_value(const Vector& w, const SampleBatch& batch) const {
  check_dim(w);
  if (batch.indices.empty()) throw DimensionError("logistic: empty batch");
  double loss = 0.0;
  for (std::size_t i : batch.indices) loss += softplus(-labels_[i] * rows_.dot(i, w));
  return 0.5 * lambda_ * norm_sq(w) + loss / static_cast<double>(batch.indices.size());
}

double LogisticDataset::expected_value(const Vector& w) const {
  check_dim(w);
  double pos = 0.0;
  for (std::size_t i : positives_) pos += softplus(-rows_.dot(i, w));
  double neg = 0.0;
  for (std::size_t i : negatives_) neg += softplus(rows_.dot(i, w));
  const double total = gamma_ * static_cast<double>(positives_.size()) + static_cast<double>(negatives_.size());
  return 0.5 * lambda_ * norm_sq(w) + (gamma_ * pos + neg) / total;
}

Vector LogisticDataset::expected_grad(const Vector& w) const {
  check_dim(w);
  Vector g = lambda_ * w;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    const double y = labels_[i];
    rows_.add_to(-weight(i) * y * logistic_sigmoid(-y * rows_.dot(i, w)), i, g);
  }
  return g;
}

Vector LogisticDataset::sample_grad(const Vector& w, std::size_t i) const {
  check_dim(w);
  Vector g = lambda_ * w;
  const double y = labels_[i];
  rows_.add_to(-y * logistic_sigmoid(-y * rows_.dot(i, w)), i, g);
  return g;
}

LogisticSynthetic logistic_synthetic(std::size_t n, std::size_t N, double positive_frac, std::size_t nnz_per_row,
                                     Rng64& rng, double lambda, double gamma) {
  if (N == 0) throw InvalidArgument("logistic_synthetic: N must be positive");
  if (!(positive_frac > 0.0 && positive_frac < 1.0)) {
    throw InvalidArgument("logistic_synthetic: positive_frac must lie in (0, 1)");
  }
  if (nnz_per_row == 0 || nnz_per_row > n) throw InvalidArgument("logistic_synthetic: need 1 <= nnz_per_row <= n");

  Vector planted(n);
  for (double& p : planted) p = rng.normal();

  SparseBinaryRows rows;
  rows.n = n;
  std::vector<double> scores(N);
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < N; ++i) {
    // Floyd's sampling of nnz distinct columns.
    cols.clear();
    for (std::size_t j = n - nnz_per_row; j < n; ++j) {
      const std::size_t c = rng.uniform_index(j + 1);
      cols.push_back(std::find(cols.begin(), cols.end(), c) == cols.end() ? c : j);
    }
    std::sort(cols.begin(), cols.end());
    rows.add_row(cols);
    scores[i] = rows.dot(i, planted);
  }

  std::vector<double> u(N);
  for (double& ui : u) ui = rng.uniform();

  auto fraction = [&](double intercept) {
    std::size_t pos = 0;
    for (std::size_t i = 0; i < N; ++i) pos += u[i] < logistic_sigmoid(scores[i] + intercept) ? 1 : 0;
    return static_cast<double>(pos) / static_cast<double>(N);
  };

  double lo = -100.0, hi = 100.0, intercept = 0.0;
  double frac = fraction(intercept);
  for (int round = 0; round < 100 && std::abs(frac - positive_frac) > 2e-3; ++round) {
    (frac < positive_frac ? lo : hi) = intercept;
    intercept = 0.5 * (lo + hi);
    frac = fraction(intercept);
  }
  if (std::abs(frac - positive_frac) > 0.02) {
    throw InvalidArgument("logistic_synthetic: positive fraction " + std::to_string(positive_frac) +
                          " is infeasible (reached " + std::to_string(frac) + ")");
  }

  std::vector<int> labels(N);
  for (std::size_t i = 0; i < N; ++i) labels[i] = u[i] < logistic_sigmoid(scores[i] + intercept) ? 1 : -1;
  return {LogisticDataset(std::move(rows), std::move(labels), lambda, gamma), std::move(planted)};
}

}  // namespace sqn
