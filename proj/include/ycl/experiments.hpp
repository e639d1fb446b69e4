#pragma once

#include <string>
#include <vector>

#include "ycl/config.hpp"

namespace ycl {

struct RunResult {
  int exit_code = 0;  // 0 success, 2 validation error, 3 solver/runtime failure
  std::string error_code;
  std::string message;
  std::filesystem::path output_directory;
};

// Names of all runnable experiments.
std::vector<std::string> list_experiments();

// Checks the experiment name and every experiment-specific parameter without
// running any solver. Throws Error(config_invalid) on problems.
void validate_experiment(const ExperimentConfig& cfg);

// Executes the configured experiment: writes a manifest (config echo,
// version, seed, outputs), result CSV/JSON files, field binaries, a wall-time
// record (timings.json, the one file excluded from bit-reproducibility) and
// a schema description of the CSV columns. Never throws; failures come back
// as exit codes with a machine-readable error record on disk.
RunResult run_experiment(const ExperimentConfig& cfg);

}  // namespace ycl
