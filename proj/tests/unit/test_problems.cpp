#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "sqn/analysis/oracles.hpp"
#include "sqn/errors.hpp"
#include "sqn/problems/dataset_io.hpp"
#include "sqn/problems/logistic.hpp"
#include "sqn/problems/quadratic.hpp"
#include "sqn/problems/svm.hpp"
#include "test_support.hpp"

namespace sqn {
namespace {

SampleBatch theta_batch(std::vector<double> thetas, std::size_t L) {
  SampleBatch b;
  b.count = L;
  b.thetas = std::move(thetas);
  return b;
}

SampleBatch index_batch(std::vector<std::size_t> idx) {
  SampleBatch b;
  b.count = idx.size();
  b.indices = std::move(idx);
  return b;
}

LogisticDataset one_row_logistic(std::vector<std::size_t> cols, std::size_t n, int label, double lambda) {
  SparseBinaryRows rows;
  rows.n = n;
  rows.add_row(std::move(cols));
  return LogisticDataset(std::move(rows), {label}, lambda, 1.0);
}

// ---- quadratic -------------------------------------------------------------

TEST(Quadratic, DiscreteConditionNumber) {
  Rng64 rng(1);
  for (int rep = 0; rep < 20; ++rep) {
    const auto p = quadratic_new(50, DiagMode::discrete(2), 0.5, rng);
    const double k = p.condition_number();
    EXPECT_TRUE(k == 1.0 || std::abs(k - 10.0) < 1e-9 || std::abs(k - 100.0) < 1e-9) << k;
    for (double a : p.a_diag())
      EXPECT_TRUE(a == 1.0 || std::abs(a - 0.1) < 1e-15 || std::abs(a - 0.01) < 1e-15) << a;
    for (double b : p.b()) {
      EXPECT_GE(b, 0.0);
      EXPECT_LT(b, 1.0);
    }
  }
}

TEST(Quadratic, Uniform01Diagonal) {
  Rng64 rng(2);
  const auto p = quadratic_new(3, DiagMode::uniform01(), 0.5, rng);
  for (double a : p.a_diag()) {
    EXPECT_GT(a, 0.0);
    EXPECT_LE(a, 1.0);
  }
}

TEST(Quadratic, InvalidArguments) {
  Rng64 rng(3);
  EXPECT_THROW(quadratic_new(3, DiagMode::discrete(2), 1.0, rng), InvalidArgument);
  EXPECT_THROW(quadratic_new(0, DiagMode::discrete(2), 0.5, rng), InvalidArgument);
  EXPECT_THROW(quadratic_new(3, DiagMode::discrete(-1), 0.5, rng), InvalidArgument);
  EXPECT_THROW(QuadraticProblem(Vector{1, 0}, Vector{0, 0}, 0.5), InvalidArgument);
}

TEST(Quadratic, OptimumExamples) {
  const auto w1 = *QuadraticProblem(Vector{2, 2}, Vector{2, 2}, 0.0).optimum();
  EXPECT_EQ(w1, (Vector{-1, -1}));
  const auto w2 = *QuadraticProblem(Vector{1, 4}, Vector{1, 8}, 0.0).optimum();
  EXPECT_EQ(w2, (Vector{-1, -2}));
}

TEST(Quadratic, OptimumIsStationary) {
  Rng64 rng(4);
  for (int rep = 0; rep < 20; ++rep) {
    const auto p = quadratic_new(30, DiagMode::discrete(3), 0.5, rng);
    const Vector w = *p.optimum();
    Vector g(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) g[i] = p.a_diag()[i] * w[i] + p.b()[i];
    EXPECT_LE(norm(g), 1e-12);
  }
}

TEST(Quadratic, DegenerateBoxSamplesZeros) {
  Rng64 rng(5);
  const QuadraticProblem p(Vector{1, 2, 3}, Vector{0, 0, 0}, 0.0);
  const auto b = p.sample(rng, 4);
  EXPECT_EQ(b.count, 4u);
  ASSERT_EQ(b.thetas.size(), 12u);
  for (double t : b.thetas) EXPECT_EQ(t, 0.0);
}

TEST(Quadratic, SampleBoxAndBatchSize) {
  Rng64 rng(6);
  const QuadraticProblem p(Vector{1, 2}, Vector{0, 0}, 0.3);
  const auto b = p.sample(rng, 7);
  EXPECT_EQ(b.count, 7u);
  ASSERT_EQ(b.thetas.size(), 14u);
  for (double t : b.thetas) {
    EXPECT_GE(t, -0.3);
    EXPECT_LE(t, 0.3);
  }
  EXPECT_THROW(p.sample(rng, 0), InvalidArgument);
}

TEST(Quadratic, BatchGradExample) {
  const QuadraticProblem p(Vector{1}, Vector{0}, 0.5);
  EXPECT_EQ(p.batch_grad(Vector{2}, theta_batch({0.5}, 1)), (Vector{3}));
}

TEST(Quadratic, BatchGradDimensionMismatch) {
  const QuadraticProblem p(Vector{1, 1}, Vector{0, 0}, 0.5);
  EXPECT_THROW(p.batch_grad(Vector{1}, theta_batch({0, 0}, 1)), DimensionError);
}

TEST(Quadratic, ZeroBoxGradientIsExact) {
  Rng64 rng(7);
  const auto p = quadratic_new(10, DiagMode::discrete(2), 0.0, rng);
  const Vector w = test::random_vector(10, rng);
  Vector exact(10);
  for (std::size_t i = 0; i < 10; ++i) exact[i] = p.a_diag()[i] * w[i] + p.b()[i];
  for (std::size_t L : {1u, 3u, 20u}) {
    const auto b = p.sample(rng, L);
    EXPECT_LT(test::max_abs_diff(p.batch_grad(w, b), exact), 1e-14);
    EXPECT_EQ(p.batch_value(w, b), p.expected_value(w));
  }
}

TEST(Quadratic, ExpectedValueAtOptimum) {
  const QuadraticProblem p(Vector{2, 2}, Vector{2, 2}, 0.5);
  EXPECT_DOUBLE_EQ(p.expected_value(Vector{-1, -1}), -2.0);
}

TEST(Quadratic, HessianBoundExamples) {
  auto h = *QuadraticProblem(Vector{1, 0.1}, Vector{0, 0}, 0.5).hessian_bounds();
  EXPECT_DOUBLE_EQ(h.m_tilde, 0.05);
  EXPECT_DOUBLE_EQ(h.M_tilde, 1.5);
  h = *QuadraticProblem(Vector{1, 0.1}, Vector{0, 0}, 0.0).hessian_bounds();
  EXPECT_DOUBLE_EQ(h.m_tilde, 0.1);
  EXPECT_DOUBLE_EQ(h.M_tilde, 1.0);
  h = *QuadraticProblem(Vector{1}, Vector{0}, 0.9).hessian_bounds();
  EXPECT_NEAR(h.m_tilde, 0.1, 1e-15);
  EXPECT_DOUBLE_EQ(h.M_tilde, 1.9);
}

TEST(Quadratic, SampledHessianDiagonalWithinBounds) {
  Rng64 rng(8);
  const auto p = quadratic_new(20, DiagMode::discrete(2), 0.7, rng);
  const auto h = *p.hessian_bounds();
  for (int rep = 0; rep < 100; ++rep) {
    const auto b = p.sample(rng, 1);
    for (std::size_t i = 0; i < 20; ++i) {
      const double d = p.a_diag()[i] * (1.0 + b.thetas[i]);
      EXPECT_GE(d, h.m_tilde);
      EXPECT_LE(d, h.M_tilde);
    }
  }
}

// ---- svm -------------------------------------------------------------------

TEST(Svm, SingleSampleGradientAndValue) {
  const SvmDataset d(2, {1, 0}, {1}, 0.0);
  EXPECT_EQ(d.batch_grad(Vector{0, 0}, index_batch({0})), (Vector{-2, 0}));
  EXPECT_EQ(d.batch_value(Vector{0, 0}, index_batch({0})), 1.0);
}

TEST(Svm, ValueAtZeroIsOne) {
  Rng64 rng(9);
  for (double lambda : {0.0, 1e-4, 3.0}) {
    const auto d = svm_synthetic(4, 20, rng, lambda);
    EXPECT_DOUBLE_EQ(d.expected_value(Vector(4)), 1.0);
  }
}

TEST(Svm, SyntheticClasses) {
  Rng64 rng(10);
  const auto d = svm_synthetic(2, 4, rng);
  EXPECT_EQ(std::count(d.labels().begin(), d.labels().end(), -1), 2);
  EXPECT_EQ(std::count(d.labels().begin(), d.labels().end(), 1), 2);
  EXPECT_DOUBLE_EQ(d.lambda(), 1e-4);
  EXPECT_THROW(svm_synthetic(2, 5, rng), InvalidArgument);
}

TEST(Svm, SyntheticBoxesAndMeans) {
  Rng64 rng(11);
  const std::size_t n = 5, N = 10000;
  const auto d = svm_synthetic(n, N, rng);
  std::vector<double> mean_neg(n), mean_pos(n);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double x = d.row(i)[j];
      if (d.label(i) < 0) {
        EXPECT_GE(x, -0.8);
        EXPECT_LE(x, 0.2);
        mean_neg[j] += x / (N / 2);
      } else {
        EXPECT_GE(x, -0.2);
        EXPECT_LE(x, 0.8);
        mean_pos[j] += x / (N / 2);
      }
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    EXPECT_NEAR(mean_neg[j], -0.3, 0.02);
    EXPECT_NEAR(mean_pos[j], 0.3, 0.02);
  }
}

TEST(Svm, IndicesInRange) {
  Rng64 rng(12);
  const auto d = svm_synthetic(2, 10, rng);
  const auto b = d.sample(rng, 3);
  EXPECT_EQ(b.count, 3u);
  ASSERT_EQ(b.indices.size(), 3u);
  for (auto i : b.indices) EXPECT_LT(i, 10u);
}

TEST(Svm, ExpectedValueIsMeanOverAllRows) {
  Rng64 rng(13);
  const auto d = svm_synthetic(6, 50, rng, 0.01);
  for (int rep = 0; rep < 10; ++rep) {
    const Vector w = test::random_vector(6, rng);
    double mean = 0.0;
    for (std::size_t i = 0; i < 50; ++i) mean += d.batch_value(w, index_batch({i})) / 50.0;
    EXPECT_NEAR(d.expected_value(w), mean, 1e-12 * std::max(1.0, std::abs(mean)));
  }
}

// ---- logistic --------------------------------------------------------------

TEST(Logistic, SingleSampleGradientAndValue) {
  const auto d = one_row_logistic({0}, 2, 1, 0.0);
  const Vector g = d.batch_grad(Vector{0, 0}, index_batch({0}));
  EXPECT_DOUBLE_EQ(g[0], -0.5);
  EXPECT_DOUBLE_EQ(g[1], 0.0);
  EXPECT_DOUBLE_EQ(d.batch_value(Vector{0, 0}, index_batch({0})), std::log(2.0));
}

TEST(Logistic, RejectsGammaBelowOne) {
  SparseBinaryRows rows;
  rows.n = 2;
  rows.add_row({0});
  EXPECT_THROW(LogisticDataset(rows, {1}, 0.0, 0.5), InvalidArgument);
  EXPECT_THROW(LogisticDataset(rows, {2}, 0.0, 1.0), InvalidArgument);
}

TEST(Logistic, SyntheticSparsityAndImbalance) {
  Rng64 rng(14);
  const auto syn = logistic_synthetic(1000, 5000, 0.052, 21, rng);
  const auto& rows = syn.data.rows();
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    std::set<std::size_t> cols(rows.columns.begin() + static_cast<long>(rows.offsets[i]),
                               rows.columns.begin() + static_cast<long>(rows.offsets[i + 1]));
    EXPECT_EQ(cols.size(), 21u);
  }
  EXPECT_GE(syn.data.positive_fraction(), 0.032);
  EXPECT_LE(syn.data.positive_fraction(), 0.072);
}

TEST(Logistic, SyntheticRejectsBadArguments) {
  Rng64 rng(15);
  EXPECT_THROW(logistic_synthetic(10, 100, 0.0, 2, rng), InvalidArgument);
  EXPECT_THROW(logistic_synthetic(10, 100, 0.1, 11, rng), InvalidArgument);
}

TEST(Logistic, BiasedSamplingFrequency) {
  Rng64 rng(16);
  // Exact 5.2% positives: 52 of 1000 rows.
  SparseBinaryRows rows;
  rows.n = 3;
  std::vector<int> labels;
  for (int i = 0; i < 1000; ++i) {
    rows.add_row({static_cast<std::size_t>(i % 3)});
    labels.push_back(i < 52 ? 1 : -1);
  }
  const LogisticDataset d(rows, labels, 0.0, 18.2);
  const double expected = 18.2 * 0.052 / (18.2 * 0.052 + 0.948);
  const int draws = 100000;
  int pos = 0;
  for (int k = 0; k < draws; ++k) pos += labels[d.draw_index(rng)] > 0;
  EXPECT_NEAR(static_cast<double>(pos) / draws, expected, 0.01);
}

TEST(Logistic, WeightsSumToOneAndMatchObjective) {
  Rng64 rng(17);
  const auto syn = logistic_synthetic(20, 300, 0.2, 3, rng, 1e-3, 5.0);
  const auto& d = syn.data;
  double total = 0.0;
  for (std::size_t i = 0; i < d.num_samples(); ++i) total += d.weight(i);
  EXPECT_NEAR(total, 1.0, 1e-12);
  const Vector w = test::random_vector(20, rng);
  double weighted = 0.0;
  for (std::size_t i = 0; i < d.num_samples(); ++i) weighted += d.weight(i) * d.batch_value(w, index_batch({i}));
  EXPECT_NEAR(d.expected_value(w), weighted, 1e-12 * std::max(1.0, std::abs(weighted)));
}

TEST(Logistic, PlantedModelRecovery) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng64 rng(seed);
    const auto syn = logistic_synthetic(30, 2000, 0.2, 4, rng, 1e-4, 1.0);
    Vector w(30);
    for (int it = 0; it < 300; ++it) axpy(-2.0, syn.data.expected_grad(w), w);
    const double cosine = dot(w, syn.planted) / (norm(w) * norm(syn.planted));
    EXPECT_GT(cosine, 0.0) << "seed " << seed;
  }
}

// ---- shared properties ------------------------------------------------------

struct Fixture {
  std::unique_ptr<StochasticProblem> p;
};

std::vector<Fixture> all_problems(Rng64& rng) {
  std::vector<Fixture> out;
  out.push_back({std::make_unique<QuadraticProblem>(quadratic_new(8, DiagMode::discrete(2), 0.5, rng))});
  out.push_back({std::make_unique<SvmDataset>(svm_synthetic(6, 200, rng))});
  out.push_back({std::make_unique<LogisticDataset>(logistic_synthetic(12, 300, 0.2, 3, rng, 1e-3).data)});
  return out;
}

TEST(Problems, GradientMatchesFiniteDifferences) {
  Rng64 rng(18);
  for (auto& fx : all_problems(rng)) {
    const auto& p = *fx.p;
    const auto* svm = dynamic_cast<const SvmDataset*>(&p);
    for (int rep = 0; rep < 50; ++rep) {
      const Vector w = test::random_vector(p.dim(), rng);
      const auto batch = p.sample(rng, 1 + rng.uniform_index(5));
      if (svm) {
        bool near_kink = false;
        for (auto i : batch.indices) {
          double m = 0.0;
          for (std::size_t j = 0; j < p.dim(); ++j) m += svm->row(i)[j] * w[j];
          near_kink = near_kink || std::abs(1.0 - svm->label(i) * m) < 1e-4;
        }
        if (near_kink) continue;
      }
      const Vector g = p.batch_grad(w, batch);
      const Vector fd = finite_diff_grad([&](const Vector& x) { return p.batch_value(x, batch); }, w, 1e-6);
      for (std::size_t i = 0; i < g.size(); ++i)
        EXPECT_LE(std::abs(g[i] - fd[i]), 1e-5 * std::max(1.0, std::abs(g[i]))) << p.name() << " coord " << i;
    }
  }
}

TEST(Problems, StochasticGradientIsUnbiased) {
  Rng64 rng(19);
  for (auto& fx : all_problems(rng)) {
    const auto& p = *fx.p;
    const std::size_t n = p.dim();
    const Vector w = test::random_vector(n, rng);
    const Vector target = p.expected_grad(w);
    const int reps = 10000;
    Vector sum(n), sum_sq(n);
    for (int k = 0; k < reps; ++k) {
      const Vector g = p.batch_grad(w, p.sample(rng, 1));
      for (std::size_t i = 0; i < n; ++i) {
        sum[i] += g[i];
        sum_sq[i] += g[i] * g[i];
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double mean = sum[i] / reps;
      const double var = std::max(0.0, sum_sq[i] / reps - mean * mean);
      const double se = std::sqrt(var / reps);
      EXPECT_LE(std::abs(mean - target[i]), 3.0 * se + 1e-12) << p.name() << " coord " << i;
    }
  }
}

TEST(Problems, ExpectedGradMatchesFiniteDifferences) {
  Rng64 rng(20);
  for (auto& fx : all_problems(rng)) {
    const auto& p = *fx.p;
    const Vector w = test::random_vector(p.dim(), rng);
    const Vector g = p.expected_grad(w);
    const Vector fd = finite_diff_grad([&](const Vector& x) { return p.expected_value(x); }, w, 1e-6);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(g[i], fd[i], 1e-5 * std::max(1.0, std::abs(g[i])));
  }
}

TEST(Problems, DimensionMismatchThrows) {
  Rng64 rng(21);
  for (auto& fx : all_problems(rng)) {
    const auto b = fx.p->sample(rng, 1);
    EXPECT_THROW(fx.p->batch_grad(Vector(fx.p->dim() + 1), b), DimensionError);
    EXPECT_THROW(fx.p->batch_value(Vector(fx.p->dim() + 1), b), DimensionError);
  }
}

// ---- csv interchange ----------------------------------------------------------

TEST(DatasetIo, SvmRoundTrip) {
  Rng64 rng(22);
  const auto d = svm_synthetic(3, 10, rng);
  std::stringstream ss;
  write_svm_csv(ss, d);
  const auto back = read_svm_csv(ss);
  EXPECT_EQ(back.labels(), d.labels());
  EXPECT_EQ(back.features(), d.features());
}

TEST(DatasetIo, LogisticRoundTrip) {
  Rng64 rng(23);
  const auto syn = logistic_synthetic(15, 40, 0.3, 4, rng);
  std::stringstream ss;
  write_logistic_csv(ss, syn.data);
  const auto back = read_logistic_csv(ss, 15);
  EXPECT_EQ(back.labels(), syn.data.labels());
  EXPECT_EQ(back.rows().columns, syn.data.rows().columns);
  EXPECT_EQ(back.rows().offsets, syn.data.rows().offsets);
}

TEST(DatasetIo, RejectsBadLabel) {
  std::stringstream ss("3,0.1,0.2\n");
  EXPECT_THROW(read_svm_csv(ss), ConfigError);
}

}  // namespace
}  // namespace sqn
