#include "sqn/cli/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sqn/errors.hpp"

namespace sqn::cli {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError("config: '" + where + "' must be an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!keys.count(key)) {
      std::string list;
      for (const char* k : allowed) list += std::string(list.empty() ? "" : ", ") + k;
      throw ConfigError("config: unknown key '" + key + "' in " + where + " (allowed: " + list + ")");
    }
  }
}

std::string path_of(const std::string& where, const std::string& key) {
  return where == "top level" ? key : where + "." + key;
}

double get_number(const json& obj, const std::string& where, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError("config: '" + path_of(where, key) + "' must be a number");
  return v.get<double>();
}

std::uint64_t get_count(const json& obj, const std::string& where, const char* key, std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_unsigned()) {
    throw ConfigError("config: '" + path_of(where, key) + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

int get_int(const json& obj, const std::string& where, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError("config: '" + path_of(where, key) + "' must be an integer");
  return v.get<int>();
}

bool get_bool(const json& obj, const std::string& where, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) throw ConfigError("config: '" + path_of(where, key) + "' must be true or false");
  return v.get<bool>();
}

std::string get_string(const json& obj, const std::string& where, const char* key, std::string fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError("config: '" + path_of(where, key) + "' must be a string");
  return v.get<std::string>();
}

std::vector<double> get_numbers(const json& obj, const std::string& where, const char* key) {
  std::vector<double> out;
  if (!obj.contains(key)) return out;
  const json& v = obj.at(key);
  if (!v.is_array()) throw ConfigError("config: '" + path_of(where, key) + "' must be an array of numbers");
  for (const json& x : v) {
    if (!x.is_number()) throw ConfigError("config: '" + path_of(where, key) + "' must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

double default_lambda(ProblemKind kind) { return kind == ProblemKind::logistic ? 1e-6 : 1e-4; }

ProblemSpec parse_problem(const json& j) {
  const std::string where = "problem";
  reject_unknown(j, where,
                 {"kind", "n", "diag", "xi", "theta0", "num_samples", "lambda", "gamma", "positive_frac",
                  "nnz_per_row", "data_path"});
  ProblemSpec p;
  p.kind = parse_problem_kind(get_string(j, where, "kind", "quadratic"));
  p.n = get_count(j, where, "n", p.n);
  const std::string diag = get_string(j, where, "diag", "discrete");
  const int xi = get_int(j, where, "xi", 2);
  if (diag == "discrete") {
    p.diag = DiagMode::discrete(xi);
  } else if (diag == "uniform01") {
    p.diag = DiagMode::uniform01();
  } else {
    throw ConfigError("config: 'problem.diag' must be \"discrete\" or \"uniform01\"");
  }
  p.theta0 = get_number(j, where, "theta0", p.theta0);
  p.num_samples = get_count(j, where, "num_samples", p.num_samples);
  p.lambda = get_number(j, where, "lambda", default_lambda(p.kind));
  p.gamma = get_number(j, where, "gamma", p.gamma);
  p.positive_frac = get_number(j, where, "positive_frac", p.positive_frac);
  p.nnz_per_row = get_count(j, where, "nnz_per_row", p.nnz_per_row);
  p.data_path = get_string(j, where, "data_path", "");
  return p;
}

OptimizerSpec parse_optimizer(const json& j, const std::string& where) {
  reject_unknown(j, where, {"kind", "L", "mem", "delta", "Gamma", "eps0", "T0"});
  OptimizerSpec s;
  if (!j.contains("kind")) throw ConfigError("config: '" + where + ".kind' is required");
  s.kind = parse_optimizer_kind(get_string(j, where, "kind", ""));
  s.L = get_count(j, where, "L", s.L);
  s.mem = get_count(j, where, "mem", s.mem);
  s.delta = get_number(j, where, "delta", s.delta);
  s.gamma_big = get_number(j, where, "Gamma", s.gamma_big);
  s.schedule.eps0 = get_number(j, where, "eps0", s.schedule.eps0);
  s.schedule.t_big0 = get_number(j, where, "T0", s.schedule.t_big0);
  return s;
}

InitSpec parse_init(const json& j) {
  const std::string where = "init";
  reject_unknown(j, where, {"kind", "scale"});
  InitSpec init;
  const std::string kind = get_string(j, where, "kind", "zero");
  if (kind == "zero") {
    init.kind = InitSpec::Kind::zero;
  } else if (kind == "uniform") {
    init.kind = InitSpec::Kind::uniform;
  } else if (kind == "normal") {
    init.kind = InitSpec::Kind::normal;
  } else {
    throw ConfigError("config: 'init.kind' must be \"zero\", \"uniform\" or \"normal\"");
  }
  init.scale = get_number(j, where, "scale", init.scale);
  return init;
}

SweepSpec parse_sweep(const json& j) {
  const std::string where = "sweep";
  reject_unknown(j, where, {"axis", "values"});
  SweepSpec s;
  s.axis = parse_sweep_axis(get_string(j, where, "axis", "L"));
  s.values = get_numbers(j, where, "values");
  return s;
}

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("SQN_SEED");
  if (!raw || !*raw) return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (*end != '\0' || raw[0] == '-') throw ConfigError("SQN_SEED must be a non-negative integer, got '" + std::string(raw) + "'");
  return static_cast<std::uint64_t>(v);
}

}  // namespace

CliConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  const std::string where = "top level";
  reject_unknown(j, where,
                 {"problem", "optimizers", "init", "rho", "max_funcs", "eval_interval", "trials", "seed", "jobs",
                  "record_trace", "monitor_bounds", "bin_edges", "out", "verbosity", "sweep"});
  CliConfig cfg;
  ExperimentConfig& e = cfg.experiment;
  if (j.contains("problem")) e.trial.problem = parse_problem(j.at("problem"));
  if (j.contains("optimizers")) {
    const json& list = j.at("optimizers");
    if (!list.is_array()) throw ConfigError("config: 'optimizers' must be an array");
    for (std::size_t i = 0; i < list.size(); ++i)
      e.optimizers.push_back(parse_optimizer(list[i], "optimizers[" + std::to_string(i) + "]"));
  }
  if (j.contains("init")) e.trial.init = parse_init(j.at("init"));
  e.trial.rho = get_number(j, where, "rho", e.trial.rho);
  e.trial.max_funcs = get_count(j, where, "max_funcs", e.trial.max_funcs);
  e.trial.eval_interval = get_count(j, where, "eval_interval", e.trial.eval_interval);
  e.trial.record_trace = get_bool(j, where, "record_trace", false);
  e.trial.monitor_bounds = get_bool(j, where, "monitor_bounds", false);
  e.trials = get_count(j, where, "trials", e.trials);
  e.jobs = get_int(j, where, "jobs", 0);
  e.bin_edges = get_numbers(j, where, "bin_edges");
  cfg.out_dir = get_string(j, where, "out", cfg.out_dir);
  cfg.verbosity = get_int(j, where, "verbosity", 0);
  if (j.contains("seed")) cfg.seed = get_count(j, where, "seed", 0);
  if (j.contains("sweep")) cfg.sweep = parse_sweep(j.at("sweep"));
  return cfg;
}

CliConfig load_preset(std::string_view name) {
  for (const Preset& p : presets())
    if (p.name == name) return parse_config(p.json);
  std::string list;
  for (const Preset& p : presets()) list += std::string(list.empty() ? "" : ", ") + std::string(p.name);
  throw ConfigError("unknown preset '" + std::string(name) + "' (available: " + list + ")");
}

CliConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (in) {
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
  }
  const std::string stem = std::filesystem::path(path).stem().string();
  const bool bare = std::filesystem::path(path).parent_path().empty();
  if (bare) {
    for (const Preset& p : presets())
      if (p.name == stem) return parse_config(p.json);
  }
  throw ConfigError("cannot read config file '" + path + "'");
}

void apply_overrides(CliConfig& cfg, const Overrides& ov) {
  ExperimentConfig& e = cfg.experiment;
  ProblemSpec& p = e.trial.problem;
  if (ov.problem) {
    const ProblemKind kind = parse_problem_kind(*ov.problem);
    if (kind != p.kind) p.lambda = default_lambda(kind);
    p.kind = kind;
  }
  if (ov.optimizer) {
    OptimizerSpec base = e.optimizers.empty() ? OptimizerSpec{} : e.optimizers.front();
    base.kind = parse_optimizer_kind(*ov.optimizer);
    e.optimizers = {base};
  }
  if (e.optimizers.empty()) throw ConfigError("config: no optimizers given (use 'optimizers' or --optimizer)");
  if (ov.n) p.n = *ov.n;
  if (ov.xi) p.diag = DiagMode::discrete(*ov.xi);
  if (ov.theta0) p.theta0 = *ov.theta0;
  if (ov.data) p.data_path = *ov.data;
  for (auto& s : e.optimizers) {
    if (ov.L) s.L = *ov.L;
    if (ov.mem) s.mem = *ov.mem;
    if (ov.eps0) s.schedule.eps0 = *ov.eps0;
    if (ov.t_big0) s.schedule.t_big0 = *ov.t_big0;
    if (ov.delta) s.delta = *ov.delta;
    if (ov.gamma_big) s.gamma_big = *ov.gamma_big;
  }
  if (ov.rho) e.trial.rho = *ov.rho;
  if (ov.max_funcs) e.trial.max_funcs = *ov.max_funcs;
  if (ov.trials) e.trials = *ov.trials;
  if (ov.jobs) e.jobs = *ov.jobs;
  if (ov.out) cfg.out_dir = *ov.out;
  if (ov.init_scale) {
    e.trial.init.scale = *ov.init_scale;
    if (e.trial.init.kind == InitSpec::Kind::zero) e.trial.init.kind = InitSpec::Kind::uniform;
  }
  if (ov.trace) e.trial.record_trace = true;
  if (ov.monitor_bounds) e.trial.monitor_bounds = true;

  if (ov.seed) {
    cfg.seed = *ov.seed;
  } else if (!cfg.seed) {
    cfg.seed = env_seed();
  }
  e.base_seed = cfg.seed.value_or(0);

  if (p.diag.kind == DiagMode::Kind::discrete && p.diag.xi < 0) throw ConfigError("config: xi must be non-negative");
  if (e.jobs < 0) throw ConfigError("config: jobs must be non-negative");
  e.validate();
}

}  // namespace sqn::cli
