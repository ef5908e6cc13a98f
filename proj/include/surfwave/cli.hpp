#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "surfwave/core.hpp"

namespace surfwave {

inline constexpr const char* kToolVersion = "surfwave 1.0.0";

// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitConfig = 2,
  kExitMode = 3,
  kExitContinuation = 4,
  kExitInadmissible = 5,
};

// Runs the tool in-process. Data goes to `out` unless --out names a file;
// diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<std::string> config_violations;
  std::vector<CheckResult> checks;
  bool all_pass() const;
};

// Invariant suite behind `surfwave validate`. Numerical checks are skipped
// when the config itself is invalid.
ValidationReport run_validation(const MediumConfig& cfg, const std::vector<std::string>& violations);
void write_validation_table(std::ostream& os, const ValidationReport& r);
std::string validation_json(const ValidationReport& r);

}  // namespace surfwave
