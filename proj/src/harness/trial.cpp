#include "sqn/harness/trial.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "sqn/analysis/oracles.hpp"
#include "sqn/errors.hpp"
#include "sqn/problems/dataset_io.hpp"
#include "sqn/problems/logistic.hpp"
#include "sqn/problems/svm.hpp"

namespace sqn {

std::string_view to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::quadratic: return "quadratic";
    case ProblemKind::svm: return "svm";
    case ProblemKind::logistic: return "logistic";
  }
  return "unknown";
}

ProblemKind parse_problem_kind(std::string_view name) {
  for (auto k : {ProblemKind::quadratic, ProblemKind::svm, ProblemKind::logistic})
    if (to_string(k) == name) return k;
  throw ConfigError("unknown problem '" + std::string(name) + "' (expected quadratic, svm or logistic)");
}

std::unique_ptr<StochasticProblem> make_problem(const ProblemSpec& spec, Rng64& rng) {
  if (!spec.data_path.empty()) {
    std::ifstream in(spec.data_path);
    if (!in) throw ConfigError("cannot open dataset '" + spec.data_path + "'");
    switch (spec.kind) {
      case ProblemKind::svm: return std::make_unique<SvmDataset>(read_svm_csv(in, spec.lambda));
      case ProblemKind::logistic:
        return std::make_unique<LogisticDataset>(read_logistic_csv(in, spec.n, spec.lambda, spec.gamma));
      case ProblemKind::quadratic: throw ConfigError("quadratic problems are synthesized, not read from a file");
    }
  }
  switch (spec.kind) {
    case ProblemKind::quadratic:
      return std::make_unique<QuadraticProblem>(quadratic_new(spec.n, spec.diag, spec.theta0, rng));
    case ProblemKind::svm:
      return std::make_unique<SvmDataset>(svm_synthetic(spec.n, spec.num_samples, rng, spec.lambda));
    case ProblemKind::logistic: {
      auto syn = logistic_synthetic(spec.n, spec.num_samples, spec.positive_frac, spec.nnz_per_row, rng,
                                    spec.lambda, spec.gamma);
      return std::make_unique<LogisticDataset>(std::move(syn.data));
    }
  }
  throw ConfigError("unknown problem kind");
}

Vector make_initial_point(const InitSpec& init, std::size_t n, Rng64& rng) {
  Vector w(n);
  switch (init.kind) {
    case InitSpec::Kind::zero: break;
    case InitSpec::Kind::uniform:
      for (std::size_t i = 0; i < n; ++i) w[i] = rng.uniform(-init.scale, init.scale);
      break;
    case InitSpec::Kind::normal:
      for (std::size_t i = 0; i < n; ++i) w[i] = init.scale * rng.normal();
      break;
  }
  return w;
}

void TrialConfig::validate() const {
  try {
    optimizer.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (!(rho >= 0.0)) throw ConfigError("rho must be non-negative");
  if (max_funcs < optimizer.L) throw ConfigError("max_funcs must be at least L");
  if (eval_interval == 0) throw ConfigError("eval_interval must be at least 1");
  if (problem.n == 0) throw ConfigError("problem dimension n must be at least 1");
  if (!(init.scale >= 0.0)) throw ConfigError("init scale must be non-negative");
}

namespace {

class BoundMonitor {
public:
  BoundMonitor(const StochasticProblem& problem, const OptimizerSpec& spec) {
    if (spec.kind != OptimizerKind::olbfgs) throw IncompatibleError("bound monitoring applies to olbfgs only");
    const auto hb = problem.hessian_bounds();
    if (!hb) {
      throw IncompatibleError("bound monitoring needs Hessian bounds, which '" + std::string(problem.name()) +
                              "' does not provide");
    }
    hb_ = *hb;
    n_ = problem.dim();
    mem_ = spec.mem;
    consts_ = bound_constants(n_, mem_, hb_.m_tilde, hb_.M_tilde, hb_.m, hb_.M, 0.0);
  }

  void observe(std::size_t t, const OlbfgsOptimizer& opt) {
    if (const auto& pair = opt.last_pair()) {
      Lemma1Check chk = check_lemma1(*pair, hb_.m_tilde, hb_.M_tilde);
      chk.t = t;
      report_.pairs.push_back(chk);
    }
    const Matrix b = dense_hessian_oracle(opt.state().pairs(), opt.state().gamma_hat(), n_);
    BoundRow row = check_lemma2_3(b, consts_, n_, mem_);
    row.t = t;
    report_.rows.push_back(row);
  }

  BoundReport take() { return std::move(report_); }

private:
  HessianBounds hb_;
  std::size_t n_ = 0;
  std::size_t mem_ = 0;
  BoundConstants consts_;
  BoundReport report_;
};

}  // namespace

TrialResult run_trial(const StochasticProblem& problem, const TrialConfig& cfg) {
  cfg.validate();
  const std::size_t n = problem.dim();
  auto opt = make_optimizer(cfg.optimizer, problem);
  std::optional<BoundMonitor> monitor;
  if (cfg.monitor_bounds) monitor.emplace(problem, cfg.optimizer);

  Rng64 init_rng(mix_seed(cfg.seed, kInitStream));
  Rng64 rng(mix_seed(cfg.seed, kSamplingStream));
  Vector w = make_initial_point(cfg.init, n, init_rng);

  const std::optional<Vector> w_star = problem.optimum();
  const double w_star_norm = w_star ? norm(*w_star) : 0.0;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto rel_dist = [&](const Vector& x) {
    return w_star ? norm(x - *w_star) / w_star_norm : nan;
  };
  // rho = 0 can never be met; skip the (possibly costly) evaluations.
  const bool check = cfg.rho > 0.0;

  TrialResult res;
  const std::size_t L = cfg.optimizer.L;
  std::size_t funcs = 0;
  std::size_t t = 0;
  for (;;) {
    if (t % cfg.eval_interval == 0 && (check || cfg.record_trace)) {
      const double rd = rel_dist(w);
      const double obj = (cfg.record_trace || !w_star) ? problem.expected_value(w) : nan;
      if (cfg.record_trace) res.trace.push_back({t, funcs, rd, obj});
      const double metric = w_star ? rd : obj;
      if (check && funcs < cfg.max_funcs && metric <= cfg.rho) {
        res.converged = true;
        break;
      }
    }
    if (funcs + L > cfg.max_funcs) break;
    const StepStats st = opt->iterate(problem, rng, w);
    funcs += st.funcs_processed;
    res.grad_evals += st.grad_evals;
    res.mults += st.mults;
    ++t;
    if (monitor) monitor->observe(t, static_cast<const OlbfgsOptimizer&>(*opt));
    if (!all_finite(w)) break;
  }
  res.iterations = t;
  res.tau_metric = res.converged ? funcs : cfg.max_funcs;
  res.final_rel_dist = rel_dist(w);
  res.final_objective = problem.expected_value(w);
  if (monitor) res.bounds = monitor->take();
  return res;
}

TrialResult run_trial(const TrialConfig& cfg) {
  cfg.validate();
  Rng64 prng(mix_seed(cfg.seed, kProblemStream));
  const auto problem = make_problem(cfg.problem, prng);
  return run_trial(*problem, cfg);
}

}  // namespace sqn
