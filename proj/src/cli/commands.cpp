#include "sqn/cli/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sqn/cli/config.hpp"
#include "sqn/cli/verify.hpp"
#include "sqn/errors.hpp"
#include "sqn/harness/csv.hpp"
#include "sqn/optimizers/curvature.hpp"

namespace sqn::cli {
namespace {

namespace fs = std::filesystem;

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  return out;
}

void write_experiment(const fs::path& dir, const ExperimentSummary& summary) {
  fs::create_directories(dir);
  {
    auto out = open_out(dir / "summary.csv");
    write_summary_csv(out, summary);
  }
  for (std::size_t m = 0; m < summary.methods.size(); ++m) {
    const MethodSummary& ms = summary.methods[m];
    if (m == 0) {
      auto out = open_out(dir / "histogram.csv");
      write_histogram_csv(out, summary.bin_edges, ms.histogram);
    }
    auto out = open_out(dir / ("histogram_" + ms.label + ".csv"));
    write_histogram_csv(out, summary.bin_edges, ms.histogram);
  }
  for (const TrialRecord& rec : summary.records) {
    const std::string stem = "trial" + std::to_string(rec.trial) + "_" + rec.optimizer + ".csv";
    if (!rec.result.trace.empty()) {
      fs::create_directories(dir / "traces");
      auto out = open_out(dir / "traces" / stem);
      write_trace_csv(out, rec.result.trace);
    }
    if (rec.result.bounds) {
      fs::create_directories(dir / "bounds");
      auto out = open_out(dir / "bounds" / stem);
      write_bound_report_csv(out, *rec.result.bounds);
    }
  }
}

nlohmann::ordered_json methods_json(const ExperimentSummary& summary) {
  auto arr = nlohmann::ordered_json::array();
  for (const MethodSummary& m : summary.methods) {
    nlohmann::ordered_json j;
    j["optimizer"] = m.label;
    j["mean_tau"] = m.mean_tau;
    j["std_tau"] = m.std_tau;
    j["median_tau"] = m.median_tau;
    j["min_tau"] = m.min_tau;
    j["max_tau"] = m.max_tau;
    j["failures"] = m.failures;
    arr.push_back(std::move(j));
  }
  return arr;
}

void log_config(const CliConfig& cfg) {
  if (cfg.verbosity <= 0) return;
  const ExperimentConfig& e = cfg.experiment;
  std::cerr << "problem=" << to_string(e.trial.problem.kind) << " n=" << e.trial.problem.n << " trials=" << e.trials
            << " seed=" << e.base_seed << " optimizers=";
  for (const auto& label : optimizer_labels(e.optimizers)) std::cerr << label << ' ';
  std::cerr << "out=" << cfg.out_dir << '\n';
}

int cmd_run(CliConfig cfg) {
  log_config(cfg);
  const ExperimentSummary summary = run_experiment(cfg.experiment);
  write_experiment(cfg.out_dir, summary);
  nlohmann::ordered_json j;
  j["command"] = "run";
  j["trials"] = cfg.experiment.trials;
  j["seed"] = cfg.experiment.base_seed;
  j["out"] = cfg.out_dir;
  j["methods"] = methods_json(summary);
  std::cout << j.dump() << '\n';
  return kExitOk;
}

std::string value_name(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

int cmd_sweep(CliConfig cfg) {
  if (!cfg.sweep || cfg.sweep->values.empty()) throw ConfigError("sweep: no axis values given (use --values)");
  log_config(cfg);
  const SweepSpec& sw = *cfg.sweep;
  const auto summaries = sweep(sw.axis, sw.values, cfg.experiment);
  const fs::path root(cfg.out_dir);
  nlohmann::ordered_json j;
  j["command"] = "sweep";
  j["axis"] = std::string(to_string(sw.axis));
  j["out"] = cfg.out_dir;
  auto points = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    const std::string sub = std::string(to_string(sw.axis)) + "_" + value_name(sw.values[i]);
    write_experiment(root / sub, summaries[i]);
    nlohmann::ordered_json p;
    p["value"] = sw.values[i];
    p["methods"] = methods_json(summaries[i]);
    points.push_back(std::move(p));
  }
  {
    auto out = open_out(root / "sweep.csv");
    write_sweep_csv(out, sw.values, summaries);
  }
  j["points"] = std::move(points);
  std::cout << j.dump() << '\n';
  return kExitOk;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw ConfigError("sweep: cannot parse value '" + item + "'");
    out.push_back(v);
  }
  return out;
}

void add_overrides(CLI::App& app, Overrides& ov) {
  app.add_option("--problem", ov.problem, "quadratic | svm | logistic");
  app.add_option("--optimizer", ov.optimizer, "run a single optimizer: sgd | olbfgs | obfgs | res | sag");
  app.add_option("--n", ov.n, "problem dimension");
  app.add_option("--xi", ov.xi, "condition exponent for the discrete quadratic diagonal");
  app.add_option("--theta0", ov.theta0, "quadratic noise level");
  app.add_option("--L", ov.L, "samples per stochastic gradient (all optimizers)");
  app.add_option("--mem", ov.mem, "oLBFGS memory");
  app.add_option("--eps0", ov.eps0, "step size scale");
  app.add_option("--T0", ov.t_big0, "step size decay offset");
  app.add_option("--delta", ov.delta, "RES regularization");
  app.add_option("--Gamma", ov.gamma_big, "RES identity bias");
  app.add_option("--rho", ov.rho, "target relative distance (objective target for datasets)");
  app.add_option("--max-funcs", ov.max_funcs, "cap on functions processed per trial");
  app.add_option("--trials", ov.trials, "number of trials J");
  app.add_option("--seed", ov.seed, "base seed (default: $SQN_SEED, then 0)");
  app.add_option("--jobs", ov.jobs, "worker threads (0 = all)");
  app.add_option("--out", ov.out, "output directory");
  app.add_option("--init-scale", ov.init_scale, "draw w0 uniformly from [-s, s]^n");
  app.add_option("--data", ov.data, "read the dataset from CSV");
  app.add_flag("--trace", ov.trace, "write per-trial traces");
  app.add_flag("--monitor-bounds", ov.monitor_bounds, "check eigenvalue bounds along oLBFGS runs");
}

}  // namespace

int main_entry(int argc, char** argv) {
  CLI::App app{"Stochastic quasi-Newton experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string preset;
  Overrides ov;
  std::string axis;
  std::string values;
  bool values_given = false;
  int verbosity = 0;
  std::string suite = "all";
  std::uint64_t verify_seed = 0;
  double mutate = 0.0;

  auto* run = app.add_subcommand("run", "run a Monte-Carlo experiment");
  auto* sweep_cmd = app.add_subcommand("sweep", "repeat an experiment along one axis");
  auto* verify = app.add_subcommand("verify", "run the analysis property suites");
  for (CLI::App* sub : {run, sweep_cmd}) {
    sub->add_option("--config", config_path, "JSON config file (or a bundled preset name)");
    sub->add_option("--preset", preset, "bundled preset name");
    sub->add_flag("-v,--verbose", verbosity, "log the resolved config to stderr");
    add_overrides(*sub, ov);
  }
  sweep_cmd->add_option("--axis", axis, "L | xi | n");
  sweep_cmd->add_option("--values", values, "comma-separated axis values")->each([&](const std::string&) {
    values_given = true;
  });
  verify->add_option("--suite", suite, "oracle | bounds | gradients | rate | all");
  verify->add_option("--seed", verify_seed, "seed for the random cases");
  // Deliberately breaks two_loop so the oracle suite can be shown to catch it.
  verify->add_option("--mutate-two-loop", mutate)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (verify->parsed()) {
      testing_hooks::set_two_loop_perturbation(mutate);
      const auto results = run_verify(suite, verify_seed);
      print_verify_report(std::cout, results);
      for (const auto& r : results)
        if (!r.pass) return kExitVerifyFailed;
      return kExitOk;
    }

    if (!config_path.empty() && !preset.empty()) throw ConfigError("give either --config or --preset, not both");
    CliConfig cfg;
    if (!config_path.empty()) {
      cfg = load_config(config_path);
    } else if (!preset.empty()) {
      cfg = load_preset(preset);
    }
    cfg.verbosity = std::max(cfg.verbosity, verbosity);
    if (sweep_cmd->parsed()) {
      if (!cfg.sweep) cfg.sweep = SweepSpec{};
      if (!axis.empty()) cfg.sweep->axis = parse_sweep_axis(axis);
      if (values_given) cfg.sweep->values = parse_values(values);
    }
    apply_overrides(cfg, ov);
    return run->parsed() ? cmd_run(std::move(cfg)) : cmd_sweep(std::move(cfg));
  } catch (const IncompatibleError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIncompatible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
}

}  // namespace sqn::cli
