#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sqn/analysis/bounds.hpp"
#include "sqn/numerics/rng.hpp"
#include "sqn/numerics/vector.hpp"
#include "sqn/optimizers/optimizer.hpp"
#include "sqn/problems/problem.hpp"
#include "sqn/problems/quadratic.hpp"

namespace sqn {

enum class ProblemKind { quadratic, svm, logistic };

std::string_view to_string(ProblemKind kind);
/// Throws ConfigError for an unknown name.
ProblemKind parse_problem_kind(std::string_view name);

struct ProblemSpec {
  ProblemKind kind = ProblemKind::quadratic;
  std::size_t n = 50;

  // quadratic
  DiagMode diag = DiagMode::discrete(2);
  double theta0 = 0.5;

  // svm / logistic
  std::size_t num_samples = 10000;
  double lambda = 1e-4;
  double gamma = 18.2;
  double positive_frac = 0.052;
  std::size_t nnz_per_row = 10;
  std::string data_path;  // when set, the dataset is read from CSV instead of synthesized
};

/// Fresh problem instance. Synthetic instances depend only on `rng`.
std::unique_ptr<StochasticProblem> make_problem(const ProblemSpec& spec, Rng64& rng);

struct InitSpec {
  enum class Kind { zero, uniform, normal };
  Kind kind = Kind::zero;
  double scale = 1.0;  // uniform: U[-scale, scale]; normal: N(0, scale^2)
};

Vector make_initial_point(const InitSpec& init, std::size_t n, Rng64& rng);

struct TrialConfig {
  ProblemSpec problem;
  OptimizerSpec optimizer;
  InitSpec init;
  double rho = 1e-2;             // target relative distance, or objective for datasets
  std::size_t max_funcs = 10000;  // cap on functions processed
  std::size_t eval_interval = 1;  // iterations between criterion checks
  bool record_trace = false;
  bool monitor_bounds = false;
  std::uint64_t seed = 0;

  /// Throws ConfigError on inconsistent settings.
  void validate() const;
};

struct TraceRow {
  std::size_t t = 0;
  std::size_t funcs = 0;
  double rel_dist = 0.0;  // NaN when the optimum is unknown
  double objective = 0.0;
};

struct TrialResult {
  std::size_t tau_metric = 0;  // functions processed at convergence, else max_funcs
  bool converged = false;
  std::size_t iterations = 0;
  std::size_t grad_evals = 0;
  std::uint64_t mults = 0;
  double final_rel_dist = 0.0;
  double final_objective = 0.0;
  std::vector<TraceRow> trace;
  std::optional<BoundReport> bounds;
};

// Seed streams derived from the trial seed.
inline constexpr std::uint64_t kProblemStream = 1;
inline constexpr std::uint64_t kInitStream = 2;
inline constexpr std::uint64_t kSamplingStream = 3;

/// Draws the problem from cfg.seed and runs it. Throws IncompatibleError
/// when the optimizer cannot run on the problem.
TrialResult run_trial(const TrialConfig& cfg);

/// Runs on a given problem; the initial point and the sampling stream still
/// derive from cfg.seed.
TrialResult run_trial(const StochasticProblem& problem, const TrialConfig& cfg);

}  // namespace sqn
