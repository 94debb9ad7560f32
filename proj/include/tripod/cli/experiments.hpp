#pragma once

#include "tripod/cli/config.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace tripod::cli {

/// A solver failed; the message names the parameter tuple.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OutputFile {
  std::string name;
  std::string content;
};

struct RunResult {
  std::vector<OutputFile> files;
  nlohmann::json summary;
};

/// Runs the configured experiment. Output is a pure function of the config.
RunResult run_experiment(const ExperimentConfig& config);

/// Writes every file (and summary.json) below dir, creating it if needed.
void write_outputs(const std::string& dir, const RunResult& result);

/// Description of the CSV files, for --help.
std::string output_help();

/// "%.10g" formatting used in file names and CSV cells.
std::string format_number(double x);

}  // namespace tripod::cli
