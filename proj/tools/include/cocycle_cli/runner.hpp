#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cocycle_cli/scenario.hpp"

namespace cocycle::cli {

enum ExitCode : int { kExitOk = 0, kExitValidation = 2, kExitNumerical = 3 };

struct RunOptions {
  int threads = 0;  // 0: COCYCLE_LAB_THREADS, then 1
  std::optional<std::uint64_t> seed_override;
};

/// Runs every block, writing <block>.json and (for tabular ops) <block>.csv
/// into out_dir. Failures produce error.json and a nonzero exit code.
int run_scenario(const Scenario& s, const std::string& out_dir, const RunOptions& opts = {});

/// Loads from a path, or from the built-in of that name when no such file
/// exists.
int run_config(const std::string& config, const std::string& out_dir, const RunOptions& opts = {});

struct BuiltinScenario {
  std::string name;
  std::string summary;
  std::string text;
};

const std::vector<BuiltinScenario>& builtin_scenarios();
std::string list_scenarios();

int resolve_threads(int requested);

}  // namespace cocycle::cli
