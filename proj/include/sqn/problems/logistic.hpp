#pragma once

#include <cstddef>
#include <vector>

#include "sqn/problems/problem.hpp"

namespace sqn {

inline constexpr double kLogisticDefaultLambda = 1e-6;
inline constexpr double kLogisticDefaultGamma = 18.2;

/// Sparse binary rows: row i holds the positions of its one-valued entries.
struct SparseBinaryRows {
  std::size_t n = 0;
  std::vector<std::size_t> offsets{0};
  std::vector<std::size_t> columns;

  std::size_t rows() const noexcept { return offsets.size() - 1; }
  void add_row(std::vector<std::size_t> cols);
  double dot(std::size_t i, const Vector& w) const;
  void add_to(double coeff, std::size_t i, Vector& g) const;
};

/// Class-weighted logistic regression.
///
/// F(w) = lambda/2 ||w||^2 + 1/M [ gamma sum_{y=+1} log(1+e^{-x^T w}) + sum_{y=-1} log(1+e^{x^T w}) ]
/// with M = gamma #S+ + #S-. The sampler picks positive rows gamma times as
/// often as negative rows, so per-sample terms are never reweighted.
class LogisticDataset final : public StochasticProblem, public FiniteSum {
public:
  /// Throws InvalidArgument for gamma < 1, label not +-1 or size mismatch.
  LogisticDataset(SparseBinaryRows rows, std::vector<int> labels, double lambda, double gamma);

  std::string_view name() const override { return "logistic"; }
  std::size_t dim() const override { return rows_.n; }

  SampleBatch sample(Rng64& rng, std::size_t L) const override;
  Vector batch_grad(const Vector& w, const SampleBatch& batch) const override;
  double batch_value(const Vector& w, const SampleBatch& batch) const override;
  double expected_value(const Vector& w) const override;
  Vector expected_grad(const Vector& w) const override;
  const FiniteSum* finite_sum() const override { return this; }

  std::size_t num_samples() const override { return labels_.size(); }
  double weight(std::size_t i) const override;
  Vector sample_grad(const Vector& w, std::size_t i) const override;

  /// Index drawn with the gamma-biased distribution.
  std::size_t draw_index(Rng64& rng) const;

  double lambda() const noexcept { return lambda_; }
  double gamma() const noexcept { return gamma_; }
  const SparseBinaryRows& rows() const noexcept { return rows_; }
  const std::vector<int>& labels() const noexcept { return labels_; }
  std::size_t num_positive() const noexcept { return positives_.size(); }
  double positive_fraction() const;

private:
  SparseBinaryRows rows_;
  std::vector<int> labels_;
  double lambda_;
  double gamma_;
  std::vector<std::size_t> positives_;
  std::vector<std::size_t> negatives_;
};

struct LogisticSynthetic {
  LogisticDataset data;
  Vector planted;  // weight vector used to draw labels
};

/// Rows with exactly nnz_per_row ones at random positions; labels from a
/// planted logistic model whose intercept is bisected until the positive
/// fraction is within 0.02 of positive_frac. Throws InvalidArgument when that
/// fails after 100 rounds or when the arguments are out of range.
LogisticSynthetic logistic_synthetic(std::size_t n, std::size_t N, double positive_frac,
                                     std::size_t nnz_per_row, Rng64& rng,
                                     double lambda = kLogisticDefaultLambda,
                                     double gamma = kLogisticDefaultGamma);

double logistic_sigmoid(double z);
/// log(1 + e^z) without overflow.
double softplus(double z);

}  // namespace sqn
