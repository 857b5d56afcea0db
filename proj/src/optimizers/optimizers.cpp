#include <cmath>
#include <string>

#include "sqn/errors.hpp"
#include "sqn/numerics/linalg.hpp"
#include "sqn/optimizers/optimizer.hpp"

namespace sqn {

void StepSchedule::validate() const {
  if (!(eps0 > 0.0)) throw InvalidArgument("schedule: eps0 must be positive");
  if (!(t_big0 > 0.0)) throw InvalidArgument("schedule: T0 must be positive");
}

std::string_view to_string(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::sgd: return "sgd";
    case OptimizerKind::olbfgs: return "olbfgs";
    case OptimizerKind::obfgs: return "obfgs";
    case OptimizerKind::res: return "res";
    case OptimizerKind::sag: return "sag";
  }
  return "unknown";
}

OptimizerKind parse_optimizer_kind(std::string_view name) {
  for (auto k : {OptimizerKind::sgd, OptimizerKind::olbfgs, OptimizerKind::obfgs, OptimizerKind::res,
                 OptimizerKind::sag})
    if (to_string(k) == name) return k;
  throw ConfigError("unknown optimizer '" + std::string(name) + "' (expected sgd, olbfgs, obfgs, res or sag)");
}

void OptimizerSpec::validate() const {
  schedule.validate();
  if (L == 0) throw InvalidArgument("optimizer: L must be at least 1");
  if (kind == OptimizerKind::olbfgs && mem == 0) throw InvalidArgument("olbfgs: mem must be at least 1");
  if (kind == OptimizerKind::res) {
    if (!(delta > 0.0)) throw InvalidArgument("res: delta must be positive");
    if (!(delta < 1.0)) throw InvalidArgument("res: delta must be below 1 so that B0 = I exceeds delta I");
    if (!(gamma_big >= 0.0)) throw InvalidArgument("res: Gamma must be non-negative");
  }
}

// ---- SGD -------------------------------------------------------------------

SgdOptimizer::SgdOptimizer(OptimizerSpec spec) : Optimizer(std::move(spec)) { spec_.validate(); }

StepStats SgdOptimizer::iterate(const StochasticProblem& problem, Rng64& rng, Vector& w) {
  const SampleBatch batch = problem.sample(rng, spec_.L);
  const Vector s = problem.batch_grad(w, batch);
  axpy(-spec_.schedule.eps(t_), s, w);
  ++t_;
  return {spec_.L, spec_.L, w.size(), false};
}

// ---- oLBFGS ----------------------------------------------------------------

OlbfgsState::OlbfgsState(std::size_t mem) : mem_(mem) {
  if (mem_ == 0) throw InvalidArgument("olbfgs: mem must be at least 1");
  pairs_.reserve(mem_ + 1);
}

void OlbfgsState::push(CurvaturePair pair) {
  if (auto g = olbfgs_gamma(pair)) gamma_hat_ = *g;
  pairs_.push_back(std::move(pair));
  if (pairs_.size() > mem_) pairs_.erase(pairs_.begin());
}

OlbfgsOptimizer::OlbfgsOptimizer(OptimizerSpec spec) : Optimizer(std::move(spec)), state_(spec_.mem) {
  spec_.validate();
}

StepStats OlbfgsOptimizer::iterate(const StochasticProblem& problem, Rng64& rng, Vector& w) {
  OpCount ops;
  const SampleBatch batch = problem.sample(rng, spec_.L);
  const Vector s = problem.batch_grad(w, batch);
  const Vector d = two_loop(state_.pairs(), state_.gamma_hat(), s, &ops);

  Vector w_next = w;
  axpy(-spec_.schedule.eps(t_), d, w_next);
  ops.mults += w.size();

  // Variation gradient on the same batch.
  const Vector s_next = problem.batch_grad(w_next, batch);
  last_pair_ = make_pair(w_next - w, s_next - s, &ops);
  if (last_pair_) state_.push(*last_pair_);

  w = std::move(w_next);
  ++t_;
  return {spec_.L, 2 * spec_.L, ops.mults, last_pair_.has_value()};
}

// ---- oBFGS -----------------------------------------------------------------

ObfgsOptimizer::ObfgsOptimizer(OptimizerSpec spec, std::size_t n)
    : Optimizer(std::move(spec)), state_{Matrix::identity(n)} {
  spec_.validate();
}

StepStats ObfgsOptimizer::iterate(const StochasticProblem& problem, Rng64& rng, Vector& w) {
  OpCount ops;
  const std::size_t n = w.size();
  const SampleBatch batch = problem.sample(rng, spec_.L);
  const Vector s = problem.batch_grad(w, batch);
  const Vector d = mat_vec(state_.b_inv, s);
  ops.mults += n * n;

  Vector w_next = w;
  axpy(-spec_.schedule.eps(t_), d, w_next);
  ops.mults += n;

  const Vector s_next = problem.batch_grad(w_next, batch);
  const auto pair = make_pair(w_next - w, s_next - s, &ops);
  if (pair) bfgs_inverse_update(state_.b_inv, *pair, &ops);

  w = std::move(w_next);
  ++t_;
  return {spec_.L, 2 * spec_.L, ops.mults, pair.has_value()};
}

// ---- RES -------------------------------------------------------------------

bool res_update(Matrix& b, const Vector& v, const Vector& r_hat, double delta, OpCount* ops) {
  const std::size_t n = b.size();
  if (v.size() != n || r_hat.size() != n) throw DimensionError("res_update: dimension mismatch");
  Vector r_mod = r_hat;
  axpy(-delta, v, r_mod);
  const double vr = dot(v, r_mod);
  if (ops) ops->mults += 4 * n;
  if (!(vr > kCurvatureFloor * norm(v) * norm(r_mod))) return false;

  const Vector bv = mat_vec(b, v);
  const double vbv = dot(v, bv);
  if (!(vbv > 0.0)) return false;
  const Vector r_scaled = (1.0 / vr) * r_mod;
  const Vector bv_scaled = (1.0 / vbv) * bv;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) b(i, j) += r_scaled[i] * r_mod[j] - bv_scaled[i] * bv[j];
    b(i, i) += delta;
  }
  // Rounding can leave B slightly asymmetric; keep it exactly symmetric.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) b(j, i) = b(i, j);
  if (ops) ops->mults += 3 * n * n + 3 * n;
  return true;
}

ResOptimizer::ResOptimizer(OptimizerSpec spec, std::size_t n)
    : Optimizer(std::move(spec)), state_{Matrix::identity(n)} {
  spec_.validate();
}

StepStats ResOptimizer::iterate(const StochasticProblem& problem, Rng64& rng, Vector& w) {
  OpCount ops;
  const std::size_t n = w.size();
  const SampleBatch batch = problem.sample(rng, spec_.L);
  const Vector s = problem.batch_grad(w, batch);

  Vector d = solve_spd(state_.b, s);
  axpy(spec_.gamma_big, s, d);
  // Cholesky (n^3 - n)/6 + n(n-1)/2, two triangular solves n(n+1), bias n.
  ops.mults += (n * n * n - n) / 6 + n * (n - 1) / 2 + n * (n + 1) + n;

  Vector w_next = w;
  axpy(-spec_.schedule.eps(t_), d, w_next);
  ops.mults += n;

  const Vector s_next = problem.batch_grad(w_next, batch);
  const bool accepted = res_update(state_.b, w_next - w, s_next - s, spec_.delta, &ops);

  w = std::move(w_next);
  ++t_;
  return {spec_.L, 2 * spec_.L, ops.mults, accepted};
}

// ---- SAG -------------------------------------------------------------------

Vector SagState::recompute_sum(const FiniteSum& fs) const {
  Vector sum(n);
  const std::size_t count = fs.num_samples();
  for (std::size_t i = 0; i < count; ++i) {
    const double wi = fs.weight(i);
    for (std::size_t j = 0; j < n; ++j) sum[j] += wi * grad_table[i * n + j];
  }
  return sum;
}

SagOptimizer::SagOptimizer(OptimizerSpec spec, const StochasticProblem& problem) : Optimizer(std::move(spec)) {
  spec_.validate();
  const FiniteSum* fs = problem.finite_sum();
  if (!fs) {
    throw IncompatibleError("sag requires a finite-sum problem; '" + std::string(problem.name()) +
                            "' has infinite support");
  }
  state_.n = problem.dim();
  state_.grad_table.assign(fs->num_samples() * state_.n, 0.0);
  state_.seen.assign(fs->num_samples(), false);
  state_.grad_sum = Vector(state_.n);
}

StepStats SagOptimizer::iterate(const StochasticProblem& problem, Rng64& rng, Vector& w) {
  const FiniteSum* fs = problem.finite_sum();
  if (!fs || fs->num_samples() * state_.n != state_.grad_table.size()) {
    throw IncompatibleError("sag: problem differs from the one the state was built for");
  }
  const std::size_t n = state_.n;
  const SampleBatch batch = problem.sample(rng, spec_.L);
  for (std::size_t i : batch.indices) {
    const Vector g = fs->sample_grad(w, i);
    const double wi = fs->weight(i);
    double* slot = state_.grad_table.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      state_.grad_sum[j] += wi * (g[j] - slot[j]);
      slot[j] = g[j];
    }
    state_.seen[i] = true;
  }
  axpy(-spec_.schedule.eps(t_), state_.grad_sum, w);
  ++t_;
  return {spec_.L, spec_.L, (spec_.L + 1) * n, false};
}

// ---- factory ---------------------------------------------------------------

std::unique_ptr<Optimizer> make_optimizer(const OptimizerSpec& spec, const StochasticProblem& problem) {
  switch (spec.kind) {
    case OptimizerKind::sgd: return std::make_unique<SgdOptimizer>(spec);
    case OptimizerKind::olbfgs: return std::make_unique<OlbfgsOptimizer>(spec);
    case OptimizerKind::obfgs: return std::make_unique<ObfgsOptimizer>(spec, problem.dim());
    case OptimizerKind::res: return std::make_unique<ResOptimizer>(spec, problem.dim());
    case OptimizerKind::sag: return std::make_unique<SagOptimizer>(spec, problem);
  }
  throw ConfigError("unknown optimizer kind");
}

}  // namespace sqn
