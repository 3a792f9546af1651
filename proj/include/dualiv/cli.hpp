#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "dualiv/error.hpp"
#include "dualiv/estimators.hpp"
#include "dualiv/io.hpp"
#include "dualiv/simulation.hpp"

namespace dualiv {

struct EstimateRequest {
  std::filesystem::path input_path;
  double level = 0.95;
  double k1 = 0.0;
  double k0 = 0.0;
  ConditionOn condition_on = ConditionOn::W1;
  double relevance_tol = kDefaultRelevanceTol;
  OutputFormat output_format = OutputFormat::Json;
};

struct SimulateRequest {
  SimConfig config;
  std::optional<TableId> table;
  unsigned workers = 0;
  OutputFormat output_format = OutputFormat::Json;
};

// What a subcommand writes: `output` goes to stdout, `message` to stderr.
struct CommandResult {
  int exit_code = 0;
  std::string output;
  std::string message;
};

// {"error": {"name", "category", "subcode", "message", ...location}}
std::string error_json(const Error& error);

CommandResult run_estimate(const EstimateRequest& request);
CommandResult run_simulate(const SimulateRequest& request);
CommandResult run_theta0(const SimConfig& config, OutputFormat format);

}  // namespace dualiv
