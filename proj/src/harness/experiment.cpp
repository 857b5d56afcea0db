#include "sqn/harness/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <string>

#include <omp.h>

#include "sqn/errors.hpp"
#include "sqn/harness/histogram.hpp"

namespace sqn {

void ExperimentConfig::validate() const {
  if (optimizers.empty()) throw ConfigError("experiment lists no optimizers");
  if (trials == 0) throw ConfigError("trials must be at least 1");
  for (const auto& spec : optimizers) {
    TrialConfig t = trial;
    t.optimizer = spec;
    t.validate();
  }
  if (!bin_edges.empty()) {
    if (bin_edges.size() < 2) throw ConfigError("bin_edges needs at least two entries");
    for (std::size_t i = 1; i < bin_edges.size(); ++i)
      if (!(bin_edges[i] > bin_edges[i - 1])) throw ConfigError("bin_edges must be strictly increasing");
  }
}

std::vector<std::string> optimizer_labels(const std::vector<OptimizerSpec>& specs) {
  std::map<std::string, int> uses;
  for (const auto& s : specs) uses[std::string(to_string(s.kind))] += 1;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    std::string label(to_string(specs[i].kind));
    if (uses[label] > 1) label += "_L" + std::to_string(specs[i].L);
    if (std::count(labels.begin(), labels.end(), label) > 0) label += "_" + std::to_string(i);
    labels.push_back(std::move(label));
  }
  return labels;
}

namespace {

TrialRecord run_one(const ExperimentConfig& cfg, const std::vector<std::string>& labels, std::size_t job) {
  const std::size_t k = cfg.optimizers.size();
  const std::size_t trial = job / k;
  const std::size_t method = job % k;
  TrialConfig tc = cfg.trial;
  tc.optimizer = cfg.optimizers[method];
  tc.seed = cfg.base_seed + trial;
  return {trial, tc.seed, labels[method], run_trial(tc)};
}

// Surfaces incompatibilities (and bad problem parameters) before any work is scheduled.
void preflight(const ExperimentConfig& cfg) {
  cfg.validate();
  Rng64 prng(mix_seed(cfg.base_seed, kProblemStream));
  const auto problem = make_problem(cfg.trial.problem, prng);
  for (const auto& spec : cfg.optimizers) (void)make_optimizer(spec, *problem);
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

ExperimentSummary summarize(const ExperimentConfig& cfg, std::vector<TrialRecord> records) {
  ExperimentSummary out;
  out.bin_edges = cfg.bin_edges.empty() ? log_bin_edges(static_cast<double>(cfg.trial.max_funcs), 20)
                                        : cfg.bin_edges;
  const auto labels = optimizer_labels(cfg.optimizers);
  for (std::size_t m = 0; m < cfg.optimizers.size(); ++m) {
    MethodSummary ms;
    ms.label = labels[m];
    ms.spec = cfg.optimizers[m];
    std::vector<double> taus;
    double grads = 0.0;
    for (const auto& r : records) {
      if (r.optimizer != ms.label) continue;
      taus.push_back(static_cast<double>(r.result.tau_metric));
      grads += static_cast<double>(r.result.grad_evals);
      if (!r.result.converged) ++ms.failures;
    }
    if (!taus.empty()) {
      const double j = static_cast<double>(taus.size());
      double sum = 0.0;
      for (double x : taus) sum += x;
      ms.mean_tau = sum / j;
      double ss = 0.0;
      for (double x : taus) ss += (x - ms.mean_tau) * (x - ms.mean_tau);
      ms.std_tau = taus.size() > 1 ? std::sqrt(ss / (j - 1.0)) : 0.0;
      ms.median_tau = median_of(taus);
      ms.min_tau = *std::min_element(taus.begin(), taus.end());
      ms.max_tau = *std::max_element(taus.begin(), taus.end());
      ms.mean_grad_evals = grads / j;
    }
    ms.histogram = histogram(taus, out.bin_edges);
    out.methods.push_back(std::move(ms));
  }
  out.records = std::move(records);
  return out;
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg) {
  preflight(cfg);
  const auto labels = optimizer_labels(cfg.optimizers);
  const std::size_t jobs = cfg.trials * cfg.optimizers.size();
  std::vector<TrialRecord> records(jobs);
  std::vector<std::exception_ptr> errors(jobs);
  const int threads = cfg.jobs > 0 ? cfg.jobs : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(jobs); ++j) {
    try {
      records[static_cast<std::size_t>(j)] = run_one(cfg, labels, static_cast<std::size_t>(j));
    } catch (...) {
      errors[static_cast<std::size_t>(j)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return summarize(cfg, std::move(records));
}

ExperimentSummary run_experiment(ExperimentConfig cfg, std::size_t trials, std::uint64_t base_seed) {
  cfg.trials = trials;
  cfg.base_seed = base_seed;
  return run_experiment(cfg);
}

ExperimentSummary run_experiment_serial(const ExperimentConfig& cfg) {
  preflight(cfg);
  const auto labels = optimizer_labels(cfg.optimizers);
  const std::size_t jobs = cfg.trials * cfg.optimizers.size();
  std::vector<TrialRecord> records;
  records.reserve(jobs);
  for (std::size_t j = 0; j < jobs; ++j) records.push_back(run_one(cfg, labels, j));
  return summarize(cfg, std::move(records));
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::L: return "L";
    case SweepAxis::xi: return "xi";
    case SweepAxis::n: return "n";
  }
  return "unknown";
}

SweepAxis parse_sweep_axis(std::string_view name) {
  for (auto a : {SweepAxis::L, SweepAxis::xi, SweepAxis::n})
    if (to_string(a) == name) return a;
  throw ConfigError("unknown sweep axis '" + std::string(name) + "' (expected L, xi or n)");
}

ExperimentConfig with_axis_value(const ExperimentConfig& cfg, SweepAxis axis, double value) {
  if (!(value >= 0.0) || value != std::floor(value)) {
    throw ConfigError("sweep values must be non-negative integers, got " + std::to_string(value));
  }
  ExperimentConfig out = cfg;
  const auto v = static_cast<std::size_t>(value);
  switch (axis) {
    case SweepAxis::L:
      for (auto& s : out.optimizers) s.L = v;
      break;
    case SweepAxis::xi: out.trial.problem.diag = DiagMode::discrete(static_cast<int>(v)); break;
    case SweepAxis::n: out.trial.problem.n = v; break;
  }
  return out;
}

std::vector<ExperimentSummary> sweep(SweepAxis axis, const std::vector<double>& values, const ExperimentConfig& cfg) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  std::vector<ExperimentSummary> out;
  for (double v : values) out.push_back(run_experiment(with_axis_value(cfg, axis, v)));
  return out;
}

}  // namespace sqn
