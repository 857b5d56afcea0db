#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sqn/harness/experiment.hpp"

namespace sqn::cli {

enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitConfigError = 2, kExitIncompatible = 3 };

struct SweepSpec {
  SweepAxis axis = SweepAxis::L;
  std::vector<double> values;
};

struct CliConfig {
  ExperimentConfig experiment;
  std::optional<SweepSpec> sweep;
  std::optional<std::uint64_t> seed;  // unset: SQN_SEED, then 0
  std::string out_dir = "out";
  int verbosity = 0;
};

/// Flat `--key value` overrides; each set field shadows the JSON value.
struct Overrides {
  std::optional<std::string> problem;
  std::optional<std::string> optimizer;  // replaces the list by one optimizer of this kind
  std::optional<std::size_t> n;
  std::optional<int> xi;
  std::optional<double> theta0;
  std::optional<std::size_t> L;
  std::optional<std::size_t> mem;
  std::optional<double> eps0;
  std::optional<double> t_big0;
  std::optional<double> delta;
  std::optional<double> gamma_big;
  std::optional<double> rho;
  std::optional<std::size_t> max_funcs;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> out;
  std::optional<double> init_scale;
  std::optional<std::string> data;
  bool trace = false;
  bool monitor_bounds = false;
};

/// Parses a JSON document. Unknown keys and ill-typed values throw ConfigError.
CliConfig parse_config(std::string_view json_text);

/// Reads `path`; when no such file exists but its stem names a bundled preset,
/// the preset is used. Throws ConfigError otherwise.
CliConfig load_config(const std::string& path);

/// Throws ConfigError for an unknown name.
CliConfig load_preset(std::string_view name);

/// Applies overrides and validates. The default base seed comes from the
/// SQN_SEED environment variable when neither JSON nor flags set one.
void apply_overrides(CliConfig& cfg, const Overrides& ov);

struct Preset {
  std::string_view name;
  std::string_view json;
};
const std::vector<Preset>& presets();

}  // namespace sqn::cli
