#include "dualiv/cli.hpp"

#include <cstdio>

#include "json.hpp"

namespace dualiv {
namespace {

const char* category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Input: return "input";
    case ErrorCategory::Estimation: return "estimation";
    case ErrorCategory::Config: return "config";
  }
  return "unknown";
}

CommandResult failure(const Error& e) {
  return CommandResult{exit_status(e.category()), error_json(e), e.what()};
}

}  // namespace

std::string error_json(const Error& error) {
  nlohmann::json body{
      {"name", std::string(error_name(error.code()))},
      {"category", category_name(error.category())},
      {"subcode", static_cast<int>(error.code())},
      {"message", error.what()},
  };
  const ErrorDetail& d = error.detail();
  if (d.z) body["z"] = *d.z;
  if (d.w) body["w"] = *d.w;
  if (d.row) body["row"] = *d.row;
  if (!d.column.empty()) body["column"] = d.column;
  if (!d.component.empty()) body["component"] = d.component;
  return nlohmann::json{{"error", body}}.dump(2) + "\n";
}

CommandResult run_estimate(const EstimateRequest& request) {
  try {
    if (!(request.level > 0.0 && request.level < 1.0)) {
      throw Error(ErrorCode::InvalidLevel, "level must lie in (0, 1)");
    }
    if (!(request.k1 >= 0.0) || !(request.k0 >= 0.0)) {
      throw Error(ErrorCode::NegativeCap, "k1 and k0 must be non-negative");
    }
    if (!(request.relevance_tol >= 0.0)) {
      throw Error(ErrorCode::InvalidConfig, "relevance tolerance must be non-negative");
    }
    const Sample sample = load_csv(request.input_path);
    EstimatorOptions options;
    options.relevance_tol = request.relevance_tol;
    options.condition_on = request.condition_on;
    const EstimateReport report =
        build_estimate_report(sample, options, {request.k1, request.k0}, request.level);
    std::string message;
    for (const std::string& w : report.warnings) message += "warning: " + w + "\n";
    return CommandResult{0, render_estimate(report, request.output_format), message};
  } catch (const Error& e) {
    return failure(e);
  }
}

CommandResult run_simulate(const SimulateRequest& request) {
  try {
    std::vector<SimConfig> grid;
    if (request.table) {
      grid = table_grid(*request.table, request.config);
    } else {
      grid.push_back(request.config);
    }
    for (const SimConfig& c : grid) {
      validate(c);
      true_late(c);  // surfaces EmptyComplierSet before any work
    }
    std::vector<SimReport> reports;
    reports.reserve(grid.size());
    for (const SimConfig& c : grid) reports.push_back(run_monte_carlo(c, request.workers));
    return CommandResult{0, render_simulation(reports, request.output_format, request.table), {}};
  } catch (const Error& e) {
    return failure(e);
  }
}

CommandResult run_theta0(const SimConfig& config, OutputFormat format) {
  try {
    validate(config);
    const double theta0 = true_late(config);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", theta0);
    std::string out;
    switch (format) {
      case OutputFormat::Json:
        out = nlohmann::json{{"theta0", theta0}}.dump(2) + "\n";
        break;
      case OutputFormat::Csv:
        out = std::string("theta0\n") + buf + "\n";
        break;
      case OutputFormat::Markdown:
        out = std::string("| theta0 |\n|---|\n| ") + buf + " |\n";
        break;
    }
    return CommandResult{0, out, {}};
  } catch (const Error& e) {
    return failure(e);
  }
}

}  // namespace dualiv
