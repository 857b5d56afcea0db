#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sqn::cli {

struct CheckResult {
  std::string suite;
  std::string check;
  bool pass = false;
  std::string detail;
};

/// Suite names: oracle, bounds, gradients, rate. "all" runs them in that order.
/// Throws ConfigError for an unknown name.
std::vector<CheckResult> run_verify(const std::string& suite, std::uint64_t seed);

/// One JSON object per line, then a summary line.
void print_verify_report(std::ostream& out, const std::vector<CheckResult>& results);

}  // namespace sqn::cli
