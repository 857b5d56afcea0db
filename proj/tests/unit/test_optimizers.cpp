#include <gtest/gtest.h>

#include <cmath>

#include "sqn/analysis/oracles.hpp"
#include "sqn/errors.hpp"
#include "sqn/numerics/linalg.hpp"
#include "sqn/optimizers/optimizer.hpp"
#include "sqn/problems/quadratic.hpp"
#include "sqn/problems/svm.hpp"
#include "test_support.hpp"

namespace sqn {
namespace {

OptimizerSpec spec_of(OptimizerKind kind, std::size_t L = 1, double eps0 = 0.1, double t0 = 1000.0) {
  OptimizerSpec s;
  s.kind = kind;
  s.L = L;
  s.schedule = {eps0, t0};
  return s;
}

// f_i(w) = g^T w for every i, so every per-sample gradient is g.
class ConstantGradients final : public StochasticProblem, public FiniteSum {
public:
  ConstantGradients(Vector g, std::size_t N) : g_(std::move(g)), N_(N) {}
  std::string_view name() const override { return "constant"; }
  std::size_t dim() const override { return g_.size(); }
  SampleBatch sample(Rng64& rng, std::size_t L) const override {
    check_batch_size(L);
    SampleBatch b;
    b.count = L;
    for (std::size_t k = 0; k < L; ++k) b.indices.push_back(rng.uniform_index(N_));
    return b;
  }
  Vector batch_grad(const Vector&, const SampleBatch&) const override { return g_; }
  double batch_value(const Vector& w, const SampleBatch&) const override { return dot(g_, w); }
  double expected_value(const Vector& w) const override { return dot(g_, w); }
  Vector expected_grad(const Vector&) const override { return g_; }
  const FiniteSum* finite_sum() const override { return this; }
  std::size_t num_samples() const override { return N_; }
  double weight(std::size_t) const override { return 1.0 / static_cast<double>(N_); }
  Vector sample_grad(const Vector&, std::size_t) const override { return g_; }

private:
  Vector g_;
  std::size_t N_;
};

// ---- schedule and pairs ----------------------------------------------------

TEST(Schedule, Examples) {
  const StepSchedule s{0.1, 1000};
  EXPECT_DOUBLE_EQ(schedule_eps(s, 0), 0.1);
  EXPECT_DOUBLE_EQ(schedule_eps(s, 1000), 0.05);
  EXPECT_DOUBLE_EQ(schedule_eps(s, 3000), 0.025);
}

TEST(Schedule, PositiveAndNonincreasing) {
  const StepSchedule s{0.3, 17};
  double prev = s.eps(0);
  for (std::size_t t = 1; t < 100000; t += 7) {
    const double e = s.eps(t);
    EXPECT_GT(e, 0.0);
    EXPECT_LE(e, prev);
    prev = e;
  }
  EXPECT_THROW((StepSchedule{0.0, 1.0}.validate()), InvalidArgument);
  EXPECT_THROW((StepSchedule{1.0, -1.0}.validate()), InvalidArgument);
}

TEST(Pairs, MakePairExamples) {
  const auto p = make_pair(Vector{1, 0}, Vector{2, 0});
  ASSERT_TRUE(p);
  EXPECT_DOUBLE_EQ(p->rho_hat, 0.5);
  EXPECT_FALSE(make_pair(Vector{1, 0}, Vector{0, 1}));
  EXPECT_FALSE(make_pair(Vector{1, 0}, Vector{-1, 0}));
  EXPECT_THROW(make_pair(Vector{1, 0}, Vector{1}), DimensionError);
}

TEST(Pairs, GammaExamples) {
  const auto same = *make_pair(Vector{1, 2}, Vector{1, 2});
  EXPECT_DOUBLE_EQ(*olbfgs_gamma(same), 1.0);
  const auto triple = *make_pair(Vector{1, 2}, Vector{3, 6});
  EXPECT_DOUBLE_EQ(*olbfgs_gamma(triple), 1.0 / 3.0);
}

// ---- two-loop ----------------------------------------------------------------

TEST(TwoLoop, EmptyMemoryIsScaledIdentity) {
  EXPECT_EQ(two_loop({}, 1.0, Vector{2, -3}), (Vector{2, -3}));
  EXPECT_EQ(two_loop({}, 2.0, Vector{2, -3}), (Vector{4, -6}));
}

TEST(TwoLoop, OnePairExample) {
  const std::vector<CurvaturePair> pairs{*make_pair(Vector{1, 0}, Vector{2, 0})};
  const Vector q = two_loop(pairs, 0.5, Vector{2, 3});
  EXPECT_DOUBLE_EQ(q[0], 1.0);
  EXPECT_DOUBLE_EQ(q[1], 1.5);
}

TEST(TwoLoop, MatchesDenseOracle) {
  Rng64 rng(1);
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t n = 1 + rng.uniform_index(6);
    const std::size_t k = rng.uniform_index(6);
    const auto pairs = test::random_pairs(n, k, rng);
    const double gamma = rng.uniform(0.2, 3.0);
    const Vector p = test::random_vector(n, rng);
    const Vector dense = test::naive_mat_vec(dense_lbfgs_oracle(pairs, gamma, n), p);
    EXPECT_LE(norm(two_loop(pairs, gamma, p) - dense), 1e-10 * norm(p));
  }
}

TEST(TwoLoop, CountsMultiplications) {
  Rng64 rng(2);
  const auto pairs = test::random_pairs(7, 3, rng);
  OpCount ops;
  two_loop(pairs, 1.0, test::random_vector(7, rng), &ops);
  EXPECT_EQ(ops.mults, (4u * 3 + 1) * 7);
}

TEST(TwoLoop, DimensionMismatchThrows) {
  const std::vector<CurvaturePair> pairs{*make_pair(Vector{1, 0}, Vector{2, 0})};
  EXPECT_THROW(two_loop(pairs, 1.0, Vector{1, 2, 3}), DimensionError);
}

// ---- SGD -------------------------------------------------------------------

TEST(Sgd, StepExample) {
  // grad F = w + b, so b = (0, -2) gives s = (1, -1) at w = (1, 1).
  const QuadraticProblem p(Vector{1, 1}, Vector{0, -2}, 0.0);
  SgdOptimizer opt(spec_of(OptimizerKind::sgd));
  Rng64 rng(3);
  Vector w{1, 1};
  const auto stats = opt.iterate(p, rng, w);
  EXPECT_DOUBLE_EQ(w[0], 0.9);
  EXPECT_DOUBLE_EQ(w[1], 1.1);
  EXPECT_EQ(stats.funcs_processed, 1u);
}

TEST(Sgd, DeterministicQuadraticIsGradientDescent) {
  const QuadraticProblem p(Vector{1, 2, 0.5}, Vector{1, -1, 0.3}, 0.0);
  SgdOptimizer opt(spec_of(OptimizerKind::sgd, 3));
  const StepSchedule sched{0.1, 1000};
  Rng64 rng(4);
  Vector w{0.5, 0.5, 0.5};
  Vector ref = w;
  for (std::size_t t = 0; t < 50; ++t) {
    opt.iterate(p, rng, w);
    const Vector g = p.expected_grad(ref);
    axpy(-sched.eps(t), g, ref);
    EXPECT_LT(test::max_abs_diff(w, ref), 1e-14);
  }
}

TEST(Sgd, StationaryPointIsFixed) {
  const QuadraticProblem p(Vector{1, 2}, Vector{1, 1}, 0.0);
  SgdOptimizer opt(spec_of(OptimizerKind::sgd));
  Rng64 rng(5);
  Vector w = *p.optimum();
  const Vector w0 = w;
  for (int t = 0; t < 10; ++t) opt.iterate(p, rng, w);
  EXPECT_EQ(w, w0);
}

// ---- oLBFGS ----------------------------------------------------------------

TEST(Olbfgs, FirstStepEqualsSgd) {
  Rng64 prng(6);
  const auto p = quadratic_new(10, DiagMode::discrete(2), 0.5, prng);
  for (std::size_t L : {1u, 5u}) {
    SgdOptimizer sgd(spec_of(OptimizerKind::sgd, L));
    OlbfgsOptimizer ol(spec_of(OptimizerKind::olbfgs, L));
    EXPECT_EQ(ol.state().gamma_hat(), 1.0);
    EXPECT_TRUE(ol.state().pairs().empty());
    Rng64 r1(7), r2(7);
    Vector w1(10, 1.0), w2(10, 1.0);
    sgd.iterate(p, r1, w1);
    ol.iterate(p, r2, w2);
    EXPECT_EQ(w1, w2);
  }
}

TEST(Olbfgs, GammaIsInverseCurvatureOnScaledIdentity) {
  const double a = 4.0;
  const QuadraticProblem p(Vector{a, a, a}, Vector{1, 2, 3}, 0.0);
  OlbfgsOptimizer opt(spec_of(OptimizerKind::olbfgs));
  Rng64 rng(8);
  Vector w(3);
  opt.iterate(p, rng, w);
  EXPECT_NEAR(opt.state().gamma_hat(), 1.0 / a, 1e-14);
}

TEST(Olbfgs, SecantConditionAfterSecondStep) {
  const QuadraticProblem p(Vector{1, 2}, Vector{1, 1}, 0.0);
  OptimizerSpec s = spec_of(OptimizerKind::olbfgs);
  s.mem = 2;
  OlbfgsOptimizer opt(s);
  Rng64 rng(9);
  Vector w{3, -2};
  opt.iterate(p, rng, w);
  const CurvaturePair first = *opt.last_pair();
  // The operator that drives the second step interpolates the first pair.
  const Matrix h1 = dense_lbfgs_oracle(opt.state().pairs(), opt.state().gamma_hat(), 2);
  EXPECT_LE(norm(test::naive_mat_vec(h1, first.r_hat) - first.v), 1e-9 * norm(first.v));
  opt.iterate(p, rng, w);
  ASSERT_EQ(opt.state().pairs().size(), 2u);
  const Matrix h2 = dense_lbfgs_oracle(opt.state().pairs(), opt.state().gamma_hat(), 2);
  const auto& last = *opt.last_pair();
  EXPECT_LE(norm(test::naive_mat_vec(h2, last.r_hat) - last.v), 1e-9 * norm(last.v));
}

TEST(Olbfgs, SecantHoldsOnStochasticRun) {
  Rng64 prng(10);
  const auto p = quadratic_new(8, DiagMode::discrete(2), 0.5, prng);
  OptimizerSpec s = spec_of(OptimizerKind::olbfgs, 3);
  s.mem = 4;
  OlbfgsOptimizer opt(s);
  Rng64 rng(11);
  Vector w(8, 1.0);
  for (int t = 0; t < 100; ++t) {
    opt.iterate(p, rng, w);
    ASSERT_TRUE(opt.last_pair());
    const Matrix h = dense_lbfgs_oracle(opt.state().pairs(), opt.state().gamma_hat(), 8);
    const auto& last = *opt.last_pair();
    EXPECT_LE(norm(test::naive_mat_vec(h, last.r_hat) - last.v), 1e-9 * norm(last.v));
    EXPECT_GT(sym_eig_extremes(0.5 * (h + h.transposed())).min, 0.0);
    EXPECT_GT(opt.state().gamma_hat(), 0.0);
  }
}

TEST(Olbfgs, MemoryWindow) {
  Rng64 prng(12);
  const auto p = quadratic_new(6, DiagMode::discrete(1), 0.5, prng);
  OptimizerSpec s = spec_of(OptimizerKind::olbfgs, 2);
  s.mem = 3;
  OlbfgsOptimizer opt(s);
  Rng64 rng(13);
  Vector w(6, 2.0);
  std::vector<Vector> history;
  for (std::size_t t = 1; t <= 10; ++t) {
    opt.iterate(p, rng, w);
    history.push_back(opt.last_pair()->v);
    const auto pairs = opt.state().pairs();
    ASSERT_EQ(pairs.size(), std::min<std::size_t>(t, 3));
    // Oldest first: the stored window is the tail of the history.
    for (std::size_t j = 0; j < pairs.size(); ++j) EXPECT_EQ(pairs[j].v, history[history.size() - pairs.size() + j]);
  }
}

TEST(Olbfgs, RunPairsSatisfyCurvatureBound) {
  Rng64 prng(14);
  const auto p = quadratic_new(10, DiagMode::discrete(2), 0.5, prng);
  const double m_tilde = p.hessian_bounds()->m_tilde;
  OlbfgsOptimizer opt(spec_of(OptimizerKind::olbfgs, 5));
  Rng64 rng(15);
  Vector w(10);
  for (int t = 0; t < 300; ++t) {
    const auto stats = opt.iterate(p, rng, w);
    ASSERT_TRUE(stats.pair_accepted);
    const auto& pr = *opt.last_pair();
    EXPECT_GE(dot(pr.v, pr.r_hat), m_tilde * norm_sq(pr.v) * (1 - 1e-9));
  }
}

TEST(Olbfgs, Bookkeeping) {
  Rng64 prng(16);
  const auto p = quadratic_new(20, DiagMode::discrete(2), 0.5, prng);
  OptimizerSpec s = spec_of(OptimizerKind::olbfgs, 4);
  s.mem = 5;
  OlbfgsOptimizer opt(s);
  Rng64 rng(17);
  Vector w(20);
  for (std::size_t t = 0; t < 10; ++t) {
    const std::size_t k = opt.state().pairs().size();
    const auto stats = opt.iterate(p, rng, w);
    EXPECT_EQ(stats.funcs_processed, 4u);
    EXPECT_EQ(stats.grad_evals, 8u);
    // two-loop, the step itself and the pair's inner products.
    EXPECT_EQ(stats.mults, (4 * k + 1) * 20 + 20 + 3 * 20);
  }
}

TEST(Olbfgs, DeterministicForEqualSeeds) {
  Rng64 prng(18);
  const auto p = quadratic_new(10, DiagMode::discrete(2), 0.5, prng);
  OlbfgsOptimizer a(spec_of(OptimizerKind::olbfgs, 2)), b(spec_of(OptimizerKind::olbfgs, 2));
  Rng64 ra(19), rb(19);
  Vector wa(10), wb(10);
  for (int t = 0; t < 200; ++t) {
    a.iterate(p, ra, wa);
    b.iterate(p, rb, wb);
  }
  EXPECT_EQ(wa, wb);
}

TEST(Olbfgs, RejectsZeroMemory) {
  OptimizerSpec s = spec_of(OptimizerKind::olbfgs);
  s.mem = 0;
  EXPECT_THROW(OlbfgsOptimizer{s}, InvalidArgument);
  s.mem = 1;
  s.L = 0;
  EXPECT_THROW(OlbfgsOptimizer{s}, InvalidArgument);
}

// ---- oBFGS -----------------------------------------------------------------

TEST(Obfgs, IdentityIsFixedPointOfUnitPair) {
  Matrix h = Matrix::identity(2);
  bfgs_inverse_update(h, *make_pair(Vector{1, 0}, Vector{1, 0}));
  EXPECT_LT(test::max_abs_diff(h, Matrix::identity(2)), 1e-15);
}

TEST(Obfgs, SingleUpdateMatchesOracle) {
  Rng64 rng(20);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 1 + rng.uniform_index(8);
    const auto pairs = test::random_pairs(n, 1, rng);
    Matrix h = Matrix::identity(n);
    bfgs_inverse_update(h, pairs[0]);
    EXPECT_LT(test::max_abs_diff(h, dense_lbfgs_oracle(pairs, 1.0, n)), 1e-10);
  }
}

TEST(Obfgs, StaysSpdOnQuadraticRun) {
  const QuadraticProblem p(Vector{1, 0.1}, Vector{0.3, 0.7}, 0.5);
  ObfgsOptimizer opt(spec_of(OptimizerKind::obfgs), 2);
  Rng64 rng(21);
  Vector w{1, 1};
  for (int t = 0; t < 100; ++t) {
    opt.iterate(p, rng, w);
    const Matrix& h = opt.state().b_inv;
    EXPECT_LE(h.asymmetry(), 1e-12 * h.max_abs());
    EXPECT_GT(sym_eig_extremes(0.5 * (h + h.transposed())).min, 0.0);
  }
}

TEST(Obfgs, QuadraticCostPerIteration) {
  Rng64 prng(22);
  const auto p = quadratic_new(30, DiagMode::discrete(1), 0.5, prng);
  ObfgsOptimizer opt(spec_of(OptimizerKind::obfgs), 30);
  Rng64 rng(23);
  Vector w(30);
  const auto stats = opt.iterate(p, rng, w);
  EXPECT_EQ(stats.mults, 30u * 30 + 30 + 3 * 30 + 4 * 30 * 30 + 3 * 30);
}

// ---- RES -------------------------------------------------------------------

TEST(Res, FirstStepExample) {
  const QuadraticProblem p(Vector{1, 1}, Vector{2, 0}, 0.0);
  OptimizerSpec s = spec_of(OptimizerKind::res);
  s.gamma_big = 0.5;
  ResOptimizer opt(s, 2);
  Rng64 rng(24);
  Vector w{0, 0};
  opt.iterate(p, rng, w);
  EXPECT_NEAR(w[0], -0.3, 1e-15);
  EXPECT_EQ(w[1], 0.0);
}

TEST(Res, RegularizedMatrixStaysAboveDelta) {
  Rng64 prng(25);
  const auto p = quadratic_new(50, DiagMode::discrete(2), 0.5, prng);
  OptimizerSpec s = spec_of(OptimizerKind::res, 5);
  s.delta = 1e-3;
  s.gamma_big = 1e-4;
  ResOptimizer opt(s, 50);
  Rng64 rng(26);
  Vector w(50);
  for (int t = 1; t <= 500; ++t) {
    opt.iterate(p, rng, w);
    const Matrix& b = opt.state().b;
    const Matrix shifted = b - Matrix::identity(50, s.delta);
    EXPECT_NO_THROW(cholesky(shifted)) << "t=" << t;
    if (t % 50 == 0) {
      const auto e = sym_eig_extremes(b);
      EXPECT_GT(e.min - s.delta, 0.0);
      // Window of B^{-1} + Gamma I.
      EXPECT_GE(1.0 / e.max + s.gamma_big, s.gamma_big);
      EXPECT_LE(1.0 / e.min + s.gamma_big, s.gamma_big + 1.0 / s.delta);
    }
  }
}

TEST(Res, ZeroRegularizationIsBfgsUpdate) {
  Rng64 rng(27);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 1 + rng.uniform_index(6);
    const Matrix b0 = test::random_spd(n, rng);
    const auto pr = test::random_pairs(n, 1, rng)[0];
    Matrix b = b0;
    ASSERT_TRUE(res_update(b, pr.v, pr.r_hat, 0.0));
    const Vector bv = test::naive_mat_vec(b0, pr.v);
    const double vbv = dot(pr.v, bv);
    const double vr = dot(pr.v, pr.r_hat);
    Matrix expect = b0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) expect(i, j) += pr.r_hat[i] * pr.r_hat[j] / vr - bv[i] * bv[j] / vbv;
    EXPECT_LT(test::max_abs_diff(b, expect), 1e-10 * std::max(1.0, expect.max_abs()));
  }
}

TEST(Res, ZeroRegularizationFromIdentityMatchesHessianOracle) {
  Rng64 rng(28);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 1 + rng.uniform_index(6);
    const auto pairs = test::random_pairs(n, 3, rng);
    Matrix b = Matrix::identity(n);
    for (const auto& pr : pairs) ASSERT_TRUE(res_update(b, pr.v, pr.r_hat, 0.0));
    const Matrix oracle = dense_hessian_oracle(pairs, 1.0, n);
    EXPECT_LT(test::max_abs_diff(b, oracle), 1e-9 * std::max(1.0, oracle.max_abs()));
  }
}

TEST(Res, RejectsNonPositiveModifiedCurvature) {
  Matrix b = Matrix::identity(2);
  // v^T (r - delta v) = 0.5 - 0.5 = 0.
  EXPECT_FALSE(res_update(b, Vector{1, 0}, Vector{0.5, 0}, 0.5));
  EXPECT_EQ(b, Matrix::identity(2));
}

TEST(Res, ValidatesHyperparameters) {
  OptimizerSpec s = spec_of(OptimizerKind::res);
  s.delta = 0.0;
  EXPECT_THROW(ResOptimizer(s, 2), InvalidArgument);
  s.delta = 1.0;
  EXPECT_THROW(ResOptimizer(s, 2), InvalidArgument);
  s.delta = 1e-3;
  s.gamma_big = -1.0;
  EXPECT_THROW(ResOptimizer(s, 2), InvalidArgument);
}

// ---- SAG -------------------------------------------------------------------

TEST(Sag, SingleSampleEqualsSgd) {
  const SvmDataset d(3, {0.2, -0.5, 0.1}, {1}, 1e-2);
  SagOptimizer sag(spec_of(OptimizerKind::sag), d);
  SgdOptimizer sgd(spec_of(OptimizerKind::sgd));
  Rng64 r1(29), r2(29);
  Vector w1{0.1, 0.2, 0.3}, w2 = w1;
  for (int t = 0; t < 50; ++t) {
    sag.iterate(d, r1, w1);
    sgd.iterate(d, r2, w2);
    EXPECT_LT(test::max_abs_diff(w1, w2), 1e-15);
  }
}

TEST(Sag, IncrementalSumMatchesRecomputation) {
  Rng64 prng(30);
  const auto d = svm_synthetic(5, 40, prng);
  SagOptimizer sag(spec_of(OptimizerKind::sag, 3, 0.05), d);
  Rng64 rng(31);
  Vector w(5);
  for (int t = 0; t < 1000; ++t) sag.iterate(d, rng, w);
  const Vector fresh = sag.state().recompute_sum(d);
  EXPECT_LT(test::max_abs_diff(sag.state().grad_sum, fresh), 1e-12);
}

TEST(Sag, ConstantGradientsGiveThatDirection) {
  const Vector g{1.5, -2.0};
  const ConstantGradients prob(g, 5);
  SagOptimizer sag(spec_of(OptimizerKind::sag), prob);
  Rng64 rng(32);
  Vector w(2);
  while (std::count(sag.state().seen.begin(), sag.state().seen.end(), true) < 5) sag.iterate(prob, rng, w);
  EXPECT_LT(test::max_abs_diff(sag.state().grad_sum, g), 1e-15);
  const Vector before = w;
  const double eps = StepSchedule{0.1, 1000}.eps(sag.iteration());
  sag.iterate(prob, rng, w);
  EXPECT_LT(test::max_abs_diff(w, before - eps * g), 1e-15);
}

TEST(Sag, RejectsInfiniteSupport) {
  const QuadraticProblem p(Vector{1}, Vector{0}, 0.5);
  EXPECT_THROW(SagOptimizer(spec_of(OptimizerKind::sag), p), IncompatibleError);
  EXPECT_THROW(make_optimizer(spec_of(OptimizerKind::sag), p), IncompatibleError);
}

// ---- factory ---------------------------------------------------------------

TEST(Factory, NamesRoundTrip) {
  for (auto k : {OptimizerKind::sgd, OptimizerKind::olbfgs, OptimizerKind::obfgs, OptimizerKind::res,
                 OptimizerKind::sag})
    EXPECT_EQ(parse_optimizer_kind(to_string(k)), k);
  EXPECT_THROW(parse_optimizer_kind("adam"), ConfigError);
}

TEST(Factory, BuildsEachKind) {
  const QuadraticProblem p(Vector{1, 2}, Vector{0, 0}, 0.5);
  for (auto k : {OptimizerKind::sgd, OptimizerKind::olbfgs, OptimizerKind::obfgs, OptimizerKind::res})
    EXPECT_EQ(make_optimizer(spec_of(k), p)->kind(), k);
}

}  // namespace
}  // namespace sqn
