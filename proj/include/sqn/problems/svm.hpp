#pragma once

#include <cstddef>
#include <vector>

#include "sqn/problems/problem.hpp"

namespace sqn {

inline constexpr double kSvmDefaultLambda = 1e-4;

/// Squared-hinge SVM over a dense training set:
/// f(w, i) = lambda/2 ||w||^2 + max(0, 1 - y_i x_i^T w)^2, i uniform on the set.
class SvmDataset final : public StochasticProblem, public FiniteSum {
public:
  /// features: N rows of length n, row-major. Labels must be +-1.
  SvmDataset(std::size_t n, std::vector<double> features, std::vector<int> labels, double lambda);

  std::string_view name() const override { return "svm"; }
  std::size_t dim() const override { return n_; }

  SampleBatch sample(Rng64& rng, std::size_t L) const override;
  Vector batch_grad(const Vector& w, const SampleBatch& batch) const override;
  double batch_value(const Vector& w, const SampleBatch& batch) const override;
  double expected_value(const Vector& w) const override;
  Vector expected_grad(const Vector& w) const override;
  const FiniteSum* finite_sum() const override { return this; }

  std::size_t num_samples() const override { return labels_.size(); }
  double weight(std::size_t) const override { return 1.0 / static_cast<double>(labels_.size()); }
  Vector sample_grad(const Vector& w, std::size_t i) const override;

  double lambda() const noexcept { return lambda_; }
  const double* row(std::size_t i) const noexcept { return features_.data() + i * n_; }
  int label(std::size_t i) const noexcept { return labels_[i]; }
  const std::vector<double>& features() const noexcept { return features_; }
  const std::vector<int>& labels() const noexcept { return labels_; }

private:
  double margin(const Vector& w, std::size_t i) const;
  // Adds coeff * x_i to g.
  void add_row(double coeff, std::size_t i, Vector& g) const;

  std::size_t n_;
  std::vector<double> features_;
  std::vector<int> labels_;
  double lambda_;
};

/// N/2 rows of class -1 with entries U[-0.8, 0.2] followed by N/2 rows of
/// class +1 with entries U[-0.2, 0.8]. Throws InvalidArgument for odd N.
SvmDataset svm_synthetic(std::size_t n, std::size_t N, Rng64& rng, double lambda = kSvmDefaultLambda);

}  // namespace sqn
