#include "sqn/cli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "sqn/analysis/oracles.hpp"
#include "sqn/analysis/rate.hpp"
#include "sqn/errors.hpp"
#include "sqn/harness/trial.hpp"
#include "sqn/numerics/format.hpp"
#include "sqn/numerics/linalg.hpp"
#include "sqn/problems/logistic.hpp"
#include "sqn/problems/quadratic.hpp"
#include "sqn/problems/svm.hpp"

namespace sqn::cli {
namespace {

std::string num(double x) { return fmt17(x); }

Vector random_vector(std::size_t n, Rng64& rng) {
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

// Pairs whose r = G v comes from an SPD G with eigenvalues in roughly [0.5, 3],
// the regime the optimizers actually produce.
std::vector<CurvaturePair> random_pairs(std::size_t n, std::size_t k, Rng64& rng) {
  std::vector<CurvaturePair> pairs;
  while (pairs.size() < k) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.normal();
    const Matrix g = (1.0 / static_cast<double>(n)) * (m.transposed() * m) + Matrix::identity(n, 0.5);
    const Vector v = random_vector(n, rng);
    if (auto p = make_pair(v, mat_vec(g, v))) pairs.push_back(std::move(*p));
  }
  return pairs;
}

double max_rel_diff(const Matrix& a, const Matrix& b) {
  return (a - b).max_abs() / std::max(1.0, b.max_abs());
}

void oracle_suite(std::uint64_t seed, std::vector<CheckResult>& out) {
  Rng64 rng(mix_seed(seed, 101));
  double worst = 0.0;
  for (int c = 0; c < 1000; ++c) {
    const std::size_t n = 1 + rng.uniform_index(6);
    const auto pairs = random_pairs(n, rng.uniform_index(6), rng);
    const double gamma = rng.uniform(0.2, 2.0);
    const Vector p = random_vector(n, rng);
    const Vector fast = two_loop(pairs, gamma, p);
    const Vector dense = mat_vec(dense_lbfgs_oracle(pairs, gamma, n), p);
    worst = std::max(worst, norm(fast - dense) / std::max(norm(dense), 1e-300));
  }
  out.push_back({"oracle", "two_loop_vs_dense", worst <= 1e-10, "cases=1000 max_rel_err=" + num(worst)});

  double worst_exp = 0.0;
  double worst_inv = 0.0;
  double worst_upd = 0.0;
  for (int c = 0; c < 200; ++c) {
    const std::size_t n = 1 + rng.uniform_index(6);
    const auto pairs = random_pairs(n, 1 + rng.uniform_index(5), rng);
    const double gamma = rng.uniform(0.2, 2.0);
    const Matrix h = dense_lbfgs_oracle(pairs, gamma, n);
    worst_exp = std::max(worst_exp, max_rel_diff(dense_lbfgs_expanded(pairs, gamma, n), h));
    const Matrix prod = h * dense_hessian_oracle(pairs, gamma, n);
    worst_inv = std::max(worst_inv, (prod - Matrix::identity(n)).max_abs());
    Matrix running = Matrix::identity(n, gamma);
    for (const auto& pr : pairs) bfgs_inverse_update(running, pr);
    worst_upd = std::max(worst_upd, max_rel_diff(running, h));
  }
  out.push_back({"oracle", "expanded_product_form", worst_exp <= 1e-9, "cases=200 max_rel_err=" + num(worst_exp)});
  out.push_back({"oracle", "mutual_inverse", worst_inv <= 1e-9, "cases=200 max_abs_err=" + num(worst_inv)});
  out.push_back({"oracle", "rank_one_inverse_update", worst_upd <= 1e-9, "cases=200 max_rel_err=" + num(worst_upd)});
}

void bounds_suite(std::uint64_t seed, std::vector<CheckResult>& out) {
  {
    const Vector v{1.0, -2.0, 0.5};
    const auto pair = make_pair(v, 2.0 * v);
    const bool ok = pair && check_lemma1(*pair, 1.0, 3.0).pass() && !check_lemma1(*pair, 2.5, 3.0).curvature_ok;
    out.push_back({"bounds", "curvature_scalar_cases", ok, "r=2v with (m~,M~)=(1,3) passes, m~=2.5 fails"});
  }
  {
    const BoundConstants k = bound_constants(2, 2, 1.0, 1.0, 1.0, 1.0, 0.0);
    const bool ok = k.C == 4.0 && std::abs(k.c - 1.0 / 64.0) <= 1e-15 &&
                    check_lemma2_3(Matrix::identity(2), k, 2, 2).pass() &&
                    !check_lemma2_3(Matrix::identity(2, 5.0), k, 2, 2).pass();
    out.push_back({"bounds", "eigen_bound_constants", ok, "c=" + num(k.c) + " C=" + num(k.C)});
  }
  TrialConfig cfg;
  cfg.problem.kind = ProblemKind::quadratic;
  cfg.problem.n = 10;
  cfg.problem.diag = DiagMode::discrete(2);
  cfg.problem.theta0 = 0.5;
  cfg.optimizer.kind = OptimizerKind::olbfgs;
  cfg.optimizer.L = 5;
  cfg.optimizer.mem = 5;
  cfg.optimizer.schedule = {0.1, 1000.0};
  cfg.rho = 0.0;
  cfg.max_funcs = 500 * cfg.optimizer.L;
  cfg.monitor_bounds = true;
  cfg.seed = seed;
  const TrialResult res = run_trial(cfg);
  const BoundReport& rep = *res.bounds;
  const auto rows_ok = std::count_if(rep.rows.begin(), rep.rows.end(), [](const BoundRow& r) { return r.pass(); });
  const auto pairs_ok = std::count_if(rep.pairs.begin(), rep.pairs.end(), [](const Lemma1Check& c) { return c.pass(); });
  std::ostringstream d;
  d << "iterates=" << rep.rows.size() << " pass=" << rows_ok << " pairs=" << rep.pairs.size() << " pass=" << pairs_ok;
  out.push_back({"bounds", "monitored_olbfgs_run", rep.all_pass() && !rep.rows.empty(), d.str()});
}

// |fd - g| <= tol * max(1, |g_i|) per coordinate; returns the worst scaled error.
double grad_error(const Vector& fd, const Vector& g) {
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(fd[i] - g[i]) / std::max(1.0, std::abs(g[i])));
  return worst;
}

void gradients_suite(std::uint64_t seed, std::vector<CheckResult>& out) {
  constexpr double kTol = 1e-5;
  constexpr double kStep = 1e-6;
  Rng64 rng(mix_seed(seed, 303));
  const QuadraticProblem quad = quadratic_new(8, DiagMode::discrete(2), 0.5, rng);
  const SvmDataset svm = svm_synthetic(6, 200, rng);
  const LogisticDataset logit = logistic_synthetic(12, 300, 0.2, 3, rng).data;
  const StochasticProblem* problems[] = {&quad, &svm, &logit};

  for (const StochasticProblem* p : problems) {
    double worst = 0.0;
    for (int c = 0; c < 50; ++c) {
      Vector w = random_vector(p->dim(), rng);
      const auto f = [&](const Vector& x) { return p->expected_value(x); };
      worst = std::max(worst, grad_error(finite_diff_grad(f, w, kStep), p->expected_grad(w)));
      const SampleBatch batch = p->sample(rng, 3);
      const auto fb = [&](const Vector& x) { return p->batch_value(x, batch); };
      worst = std::max(worst, grad_error(finite_diff_grad(fb, w, kStep), p->batch_grad(w, batch)));
    }
    out.push_back({"gradients", std::string(p->name()) + "_finite_difference", worst <= kTol,
                   "points=50 max_scaled_err=" + num(worst)});
  }
}

void rate_suite(std::uint64_t seed, std::vector<CheckResult>& out) {
  Rng64 rng(mix_seed(seed, 404));
  std::size_t passed = 0;
  for (int c = 0; c < 200; ++c) {
    const double a = rng.uniform(1.01, 10.0);
    const double t0 = a + rng.uniform(0.0, 100.0);
    const double b = rng.uniform(0.01, 10.0);
    const double u0 = rng.uniform(0.0, 10.0);
    if (rate_lemma_check(a, b, t0, u0, 10000).pass) ++passed;
  }
  out.push_back({"rate", "rate_recursion_random", passed == 200, "admissible_cases=200 pass=" + std::to_string(passed)});

  BoundConstants unit;
  unit.m = unit.M = unit.s_sq = unit.c = unit.C = 1.0;
  const double c0 = rate_constant_c0(1.0, 10.0, unit, 1.0);
  out.push_back({"rate", "c0_hand_value", std::abs(c0 - 10.0) <= 1e-12, "C0=" + num(c0)});

  bool threw = false;
  try {
    (void)rate_constant_c0(0.5, 1.0, unit, 1.0);
  } catch (const InvalidArgument&) {
    threw = true;
  }
  out.push_back({"rate", "c0_precondition_boundary", threw, "2 m eps0 T0 / C = 1 rejected"});

  // Noise-free quadratic: the stochastic gradient is exact, so the bound is
  // conditional on the trajectory actually visited.
  const QuadraticProblem quad(Vector{1.0, 2.0}, Vector{1.0, 1.0}, 0.0);
  TrialConfig cfg;
  cfg.optimizer.kind = OptimizerKind::olbfgs;
  cfg.optimizer.L = 1;
  cfg.optimizer.mem = 2;
  cfg.optimizer.schedule = {0.5, 100.0};
  cfg.init = {InitSpec::Kind::uniform, 5.0};
  cfg.rho = 0.0;
  cfg.max_funcs = 2000;
  cfg.record_trace = true;
  cfg.seed = seed;
  const TrialResult res = run_trial(quad, cfg);
  const double f_star = quad.expected_value(*quad.optimum());
  double s_sq = 0.0;
  {
    Rng64 init_rng(mix_seed(seed, kInitStream));
    Rng64 srng(mix_seed(seed, kSamplingStream));
    Vector w = make_initial_point(cfg.init, 2, init_rng);
    auto opt = make_optimizer(cfg.optimizer, quad);
    for (std::size_t t = 0; t < cfg.max_funcs; ++t) {
      s_sq = std::max(s_sq, norm_sq(quad.expected_grad(w)));
      opt->iterate(quad, srng, w);
    }
  }
  const HessianBounds hb = *quad.hessian_bounds();
  BoundConstants k = bound_constants(2, cfg.optimizer.mem, hb.m_tilde, hb.M_tilde, hb.m, hb.M, s_sq);
  const double gap0 = res.trace.front().objective - f_star;
  k.C0 = rate_constant_c0(cfg.optimizer.schedule.eps0, cfg.optimizer.schedule.t_big0, k, gap0);
  std::size_t violations = 0;
  for (const TraceRow& row : res.trace) {
    const double bound = k.C0 / (cfg.optimizer.schedule.t_big0 + static_cast<double>(row.t));
    if (row.objective - f_star > bound) ++violations;
  }
  out.push_back({"rate", "trajectory_conditional_gap_bound", violations == 0,
                 "steps=" + std::to_string(res.trace.size()) + " C0=" + num(k.C0) +
                     " violations=" + std::to_string(violations)});
}

}  // namespace

std::vector<CheckResult> run_verify(const std::string& suite, std::uint64_t seed) {
  std::vector<CheckResult> out;
  const bool all = suite == "all";
  if (!all && suite != "oracle" && suite != "bounds" && suite != "gradients" && suite != "rate") {
    throw ConfigError("unknown suite '" + suite + "' (expected oracle, bounds, gradients, rate or all)");
  }
  if (all || suite == "oracle") oracle_suite(seed, out);
  if (all || suite == "bounds") bounds_suite(seed, out);
  if (all || suite == "gradients") gradients_suite(seed, out);
  if (all || suite == "rate") rate_suite(seed, out);
  return out;
}

void print_verify_report(std::ostream& out, const std::vector<CheckResult>& results) {
  std::size_t failed = 0;
  for (const CheckResult& r : results) {
    nlohmann::ordered_json j;
    j["suite"] = r.suite;
    j["check"] = r.check;
    j["pass"] = r.pass;
    j["detail"] = r.detail;
    out << j.dump() << '\n';
    if (!r.pass) ++failed;
  }
  nlohmann::ordered_json s;
  s["checks"] = results.size();
  s["failed"] = failed;
  s["pass"] = failed == 0;
  out << s.dump() << '\n';
}

}  // namespace sqn::cli
