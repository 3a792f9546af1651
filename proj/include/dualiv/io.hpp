#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dualiv/bounds.hpp"
#include "dualiv/estimators.hpp"
#include "dualiv/inference.hpp"
#include "dualiv/sample.hpp"
#include "dualiv/simulation.hpp"

namespace dualiv {

// CSV with header y,d,z,w in any order and any letter case; one observation
// per line; LF or CRLF. y is a decimal real, d/z/w are the literals 0 or 1.
// Throws MissingColumn, ParseError (row = 1-based file line), Io, and the
// Sample validation errors.
Sample parse_csv(std::string_view text);
Sample load_csv(const std::filesystem::path& path);

enum class OutputFormat { Json, Csv, Markdown };

OutputFormat parse_output_format(std::string_view name);  // throws InvalidConfig
ConditionOn parse_condition_on(std::string_view name);    // throws InvalidConfig

struct EstimateReport {
  LateComponents fit;
  ComplierMeans complier;
  InferenceResult inference;
  HeterogeneityCaps caps;
  BoundsResult bounds;
  CellCounts counts;
  double relevance_tol = kDefaultRelevanceTol;
  std::vector<std::string> warnings;
};

// Runs the full estimation pipeline. Propagates estimation errors.
EstimateReport build_estimate_report(const Sample& sample, const EstimatorOptions& options,
                                     const HeterogeneityCaps& caps, double level);

std::string render_estimate(const EstimateReport& report, OutputFormat format);

enum class TableId { Table1, Table2, Table3, Table4 };

TableId parse_table_id(std::string_view name);  // "table1".."table4"; throws InvalidConfig
std::string_view table_name(TableId id) noexcept;

// Configuration grid of a preset table. Sample sizes, rho values and
// designs come from the preset; everything else (reps, seed, c, ...) is
// taken from `base`. table2 keeps base.rho1 / base.rho0.
std::vector<SimConfig> table_grid(TableId id, const SimConfig& base);

std::string render_simulation(std::span<const SimReport> reports, OutputFormat format,
                              std::optional<TableId> table = std::nullopt);

// JSON form of a single report, and its inverse.
std::string sim_report_to_json(const SimReport& report);
SimReport sim_report_from_json(std::string_view json);

}  // namespace dualiv
