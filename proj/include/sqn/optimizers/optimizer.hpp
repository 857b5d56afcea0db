#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sqn/numerics/matrix.hpp"
#include "sqn/numerics/rng.hpp"
#include "sqn/numerics/vector.hpp"
#include "sqn/optimizers/curvature.hpp"
#include "sqn/optimizers/schedule.hpp"
#include "sqn/problems/problem.hpp"

namespace sqn {

enum class OptimizerKind { sgd, olbfgs, obfgs, res, sag };

std::string_view to_string(OptimizerKind kind);
/// Throws ConfigError for an unknown name.
OptimizerKind parse_optimizer_kind(std::string_view name);

struct OptimizerSpec {
  OptimizerKind kind = OptimizerKind::olbfgs;
  std::size_t L = 1;        // samples per stochastic gradient
  std::size_t mem = 10;     // oLBFGS memory
  double delta = 1e-3;      // RES regularization of B
  double gamma_big = 1e-4;  // RES identity bias on the descent operator
  StepSchedule schedule;

  /// Throws InvalidArgument on out-of-range hyperparameters.
  void validate() const;
};

/// Bookkeeping for one iteration.
struct StepStats {
  std::size_t funcs_processed = 0;  // L: the x-axis of every convergence plot
  std::size_t grad_evals = 0;       // includes the same-batch variation gradient
  std::uint64_t mults = 0;          // optimizer arithmetic, gradients excluded
  bool pair_accepted = false;
};

class Optimizer {
public:
  virtual ~Optimizer() = default;

  virtual OptimizerKind kind() const = 0;
  /// One stochastic descent step; w is updated in place.
  virtual StepStats iterate(const StochasticProblem& problem, Rng64& rng, Vector& w) = 0;

  std::size_t iteration() const noexcept { return t_; }
  const OptimizerSpec& spec() const noexcept { return spec_; }

protected:
  explicit Optimizer(OptimizerSpec spec) : spec_(std::move(spec)) {}

  OptimizerSpec spec_;
  std::size_t t_ = 0;
};

// ---- states ----------------------------------------------------------------

/// Bounded FIFO of the `mem` most recent curvature pairs plus the initial scaling.
class OlbfgsState {
public:
  explicit OlbfgsState(std::size_t mem);

  std::size_t mem() const noexcept { return mem_; }
  double gamma_hat() const noexcept { return gamma_hat_; }
  /// Oldest first.
  std::span<const CurvaturePair> pairs() const noexcept { return pairs_; }

  /// Appends, evicting the oldest beyond mem, and refreshes gamma_hat from
  /// the new pair (kept when r_hat is zero).
  void push(CurvaturePair pair);

private:
  std::size_t mem_;
  double gamma_hat_ = 1.0;
  std::vector<CurvaturePair> pairs_;
};

struct ObfgsState {
  Matrix b_inv;  // current inverse Hessian approximation, SPD
};

struct ResState {
  Matrix b;  // current Hessian approximation, B - delta I SPD
};

struct SagState {
  std::size_t n = 0;
  std::vector<double> grad_table;  // N x n, zero for slots not yet visited
  std::vector<bool> seen;
  Vector grad_sum;                 // sum_i weight_i * grad_table[i]

  Vector recompute_sum(const FiniteSum& fs) const;
};

// ---- optimizers ------------------------------------------------------------

class SgdOptimizer final : public Optimizer {
public:
  explicit SgdOptimizer(OptimizerSpec spec);
  OptimizerKind kind() const override { return OptimizerKind::sgd; }
  StepStats iterate(const StochasticProblem& problem, Rng64& rng, Vector& w) override;
};

class OlbfgsOptimizer final : public Optimizer {
public:
  explicit OlbfgsOptimizer(OptimizerSpec spec);
  OptimizerKind kind() const override { return OptimizerKind::olbfgs; }
  StepStats iterate(const StochasticProblem& problem, Rng64& rng, Vector& w) override;

  const OlbfgsState& state() const noexcept { return state_; }
  /// Pair produced by the latest iteration, if it was accepted.
  const std::optional<CurvaturePair>& last_pair() const noexcept { return last_pair_; }

private:
  OlbfgsState state_;
  std::optional<CurvaturePair> last_pair_;
};

class ObfgsOptimizer final : public Optimizer {
public:
  ObfgsOptimizer(OptimizerSpec spec, std::size_t n);
  OptimizerKind kind() const override { return OptimizerKind::obfgs; }
  StepStats iterate(const StochasticProblem& problem, Rng64& rng, Vector& w) override;

  const ObfgsState& state() const noexcept { return state_; }

private:
  ObfgsState state_;
};

/// Regularized stochastic BFGS: w <- w - eps (B^{-1} + Gamma I) s, with
/// B <- B + r~ r~^T / v^T r~ - B v v^T B / v^T B v + delta I and r~ = r - delta v.
class ResOptimizer final : public Optimizer {
public:
  ResOptimizer(OptimizerSpec spec, std::size_t n);
  OptimizerKind kind() const override { return OptimizerKind::res; }
  StepStats iterate(const StochasticProblem& problem, Rng64& rng, Vector& w) override;

  const ResState& state() const noexcept { return state_; }

private:
  ResState state_;
};

class SagOptimizer final : public Optimizer {
public:
  /// Throws IncompatibleError unless the problem is a finite sum.
  SagOptimizer(OptimizerSpec spec, const StochasticProblem& problem);
  OptimizerKind kind() const override { return OptimizerKind::sag; }
  StepStats iterate(const StochasticProblem& problem, Rng64& rng, Vector& w) override;

  const SagState& state() const noexcept { return state_; }

private:
  SagState state_;
};

/// Regularized update of B. Returns false (B untouched) when v^T r~ fails the curvature floor.
bool res_update(Matrix& b, const Vector& v, const Vector& r_hat, double delta, OpCount* ops = nullptr);

/// Throws IncompatibleError when the optimizer cannot run on `problem`.
std::unique_ptr<Optimizer> make_optimizer(const OptimizerSpec& spec, const StochasticProblem& problem);

}  // namespace sqn
