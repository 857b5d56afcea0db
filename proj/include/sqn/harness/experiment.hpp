#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sqn/harness/trial.hpp"

namespace sqn {

/// J trials of every listed optimizer. Trial i uses seed base_seed + i and
/// the same problem instance for all optimizers.
struct ExperimentConfig {
  TrialConfig trial;  // optimizer field ignored; see `optimizers`
  std::vector<OptimizerSpec> optimizers;
  std::size_t trials = 50;
  std::uint64_t base_seed = 0;
  std::vector<double> bin_edges;  // empty: log_bin_edges(max_funcs, 20)
  int jobs = 0;                   // worker cap, 0 = OpenMP default

  void validate() const;
};

struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::string optimizer;
  TrialResult result;
};

struct MethodSummary {
  std::string label;
  OptimizerSpec spec;
  double mean_tau = 0.0;
  double std_tau = 0.0;  // sample standard deviation, 0 for a single trial
  double median_tau = 0.0;
  double min_tau = 0.0;
  double max_tau = 0.0;
  std::size_t failures = 0;
  std::vector<std::size_t> histogram;
  double mean_grad_evals = 0.0;
};

struct ExperimentSummary {
  std::vector<double> bin_edges;
  std::vector<MethodSummary> methods;
  std::vector<TrialRecord> records;  // trial-major, then optimizer order
};

/// Unique labels: the optimizer name, suffixed with _L<L> when names repeat.
std::vector<std::string> optimizer_labels(const std::vector<OptimizerSpec>& specs);

/// Trials run in parallel; results are ordered by (trial, optimizer) before
/// aggregation, so the summary is independent of scheduling.
ExperimentSummary run_experiment(const ExperimentConfig& cfg);
ExperimentSummary run_experiment(ExperimentConfig cfg, std::size_t trials, std::uint64_t base_seed);

/// Single-threaded reference used to check the parallel path.
ExperimentSummary run_experiment_serial(const ExperimentConfig& cfg);

ExperimentSummary summarize(const ExperimentConfig& cfg, std::vector<TrialRecord> records);

enum class SweepAxis { L, xi, n };

std::string_view to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(std::string_view name);

/// Applies `value` along `axis` to a copy of cfg: L sets every optimizer's
/// batch size, xi the discrete condition exponent, n the dimension.
ExperimentConfig with_axis_value(const ExperimentConfig& cfg, SweepAxis axis, double value);

/// One experiment per value, all sharing cfg.base_seed.
std::vector<ExperimentSummary> sweep(SweepAxis axis, const std::vector<double>& values, const ExperimentConfig& cfg);

}  // namespace sqn
