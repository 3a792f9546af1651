#include "doctest.h"

#include <string>

#include "dualiv/error.hpp"
#include "dualiv/io.hpp"
#include "json.hpp"
#include "support/fixtures.hpp"

using namespace dualiv;
using doctest::Approx;
using nlohmann::json;

namespace {

Error parse_failure(std::string_view text) {
  try {
    parse_csv(text);
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected dualiv::Error");
  return Error(ErrorCode::Io, "unreachable");
}

std::string e1_csv() {
  std::string out = "y,d,z,w\n";
  for (const auto& r : testing::kE1) {
    out += std::to_string(r[2]) + "," + std::to_string(r[2]) + "," + std::to_string(r[0]) +
           "," + std::to_string(r[1]) + "\n";
  }
  return out;
}

}  // namespace

TEST_CASE("csv with columns in any order and case") {
  const Sample s = parse_csv("W,z,Y,D\r\n1,0,2.5,1\r\n0,1,-1e-3,0\r\n");
  REQUIRE(s.size() == 2);
  CHECK(s.y()[0] == 2.5);
  CHECK(s.y()[1] == -1e-3);
  CHECK(s.d()[0] == 1);
  CHECK(s.z()[1] == 1);
  CHECK(s.w()[0] == 1);
  CHECK(parse_csv(e1_csv()) == testing::e1_y_equals_d());
  // No trailing newline.
  CHECK(parse_csv("y,d,z,w\n1,1,1,1").size() == 1);
}

TEST_CASE("csv rejections carry a location") {
  Error e = parse_failure("y,d,z,w\n1,1,1,1\n1,2,0,0\n");
  CHECK(e.code() == ErrorCode::ParseError);
  CHECK(*e.detail().row == 3);
  CHECK(e.detail().column == "d");

  e = parse_failure("y,d,z,w\nabc,1,1,1\n");
  CHECK(e.code() == ErrorCode::ParseError);
  CHECK(*e.detail().row == 2);
  CHECK(e.detail().column == "y");

  e = parse_failure("y,d,z,w\n1.5x,1,1,1\n");
  CHECK(e.code() == ErrorCode::ParseError);

  e = parse_failure("y,d,z,w\n1,1,1\n");
  CHECK(e.code() == ErrorCode::ParseError);
  CHECK(*e.detail().row == 2);

  e = parse_failure("y,d,z,w\n1,1,1,1\n\n");
  CHECK(e.code() == ErrorCode::ParseError);
  CHECK(*e.detail().row == 3);

  e = parse_failure("y,d,z,w\nnan,1,1,1\n");
  CHECK(e.code() == ErrorCode::NonFinite);
  CHECK(*e.detail().row == 2);

  e = parse_failure("y,d,z,w\n1,1.0,1,1\n");
  CHECK(e.code() == ErrorCode::ParseError);
  CHECK(e.detail().column == "d");

  e = parse_failure("y,d,z\n1,1,1\n");
  CHECK(e.code() == ErrorCode::MissingColumn);
  CHECK(e.detail().column == "w");

  e = parse_failure("y,d,z,w,x\n1,1,1,1,1\n");
  CHECK(e.code() == ErrorCode::ParseError);
  CHECK(*e.detail().row == 1);

  e = parse_failure("y,d,z,z,w\n");
  CHECK(e.code() == ErrorCode::ParseError);

  e = parse_failure("y,d,z,w\n");
  CHECK(e.code() == ErrorCode::Empty);

  e = parse_failure("");
  CHECK(e.code() == ErrorCode::MissingColumn);

  for (ErrorCode c : {ErrorCode::ParseError, ErrorCode::MissingColumn, ErrorCode::Empty,
                      ErrorCode::NonFinite}) {
    CHECK(exit_status(error_category(c)) == 2);
  }
}

TEST_CASE("missing file is an input error") {
  try {
    load_csv("/nonexistent/dualiv/input.csv");
    FAIL("expected Io");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Io);
    CHECK(exit_status(e.category()) == 2);
  }
}

TEST_CASE("estimate report json schema") {
  const Sample s = testing::random_sample(12, 2000);
  const EstimateReport r = build_estimate_report(s, {}, {0.1, 0.2}, 0.95);
  const json j = json::parse(render_estimate(r, OutputFormat::Json));
  for (const char* key : {"estimates", "inference", "bounds", "diagnostics", "meta"}) {
    CHECK(j.contains(key));
  }
  const json& est = j["estimates"];
  for (const char* key : {"late", "iv", "iv1", "rho1", "rho0", "w1", "w0", "complier_means"}) {
    CHECK(est.contains(key));
  }
  CHECK(est["late"].get<double>() == r.fit.late);
  CHECK(j["inference"]["se_late"].get<double>() == r.inference.se_late);
  CHECK(j["inference"]["ci_late"].is_array());
  CHECK(j["bounds"]["lower"].get<double>() == Approx(r.fit.late - r.bounds.half_width));
  CHECK(j["diagnostics"]["cell_counts"].size() == 4);
  CHECK(j["diagnostics"]["n"].get<std::size_t>() == 2000);
  CHECK(j["meta"].contains("version"));
}

TEST_CASE("estimate report csv and markdown renderings") {
  const Sample s = testing::e1_y_equals_d();
  const EstimateReport r = build_estimate_report(s, {}, {}, 0.95);
  const std::string csv = render_estimate(r, OutputFormat::Csv);
  CHECK(csv.find("estimates.late,") != std::string::npos);
  CHECK(csv.find("inference.se_late,") != std::string::npos);
  const std::string md = render_estimate(r, OutputFormat::Markdown);
  CHECK(md.find('|') != std::string::npos);
  CHECK(md.find("1.000") != std::string::npos);
}

TEST_CASE("format and option names") {
  CHECK(parse_output_format("json") == OutputFormat::Json);
  CHECK(parse_output_format("csv") == OutputFormat::Csv);
  CHECK(parse_output_format("markdown") == OutputFormat::Markdown);
  CHECK_THROWS_AS(parse_output_format("xml"), Error);
  CHECK(parse_condition_on("w0") == ConditionOn::W0);
  CHECK_THROWS_AS(parse_condition_on("w2"), Error);
  CHECK(parse_table_id("table3") == TableId::Table3);
  CHECK(table_name(TableId::Table2) == "table2");
  CHECK_THROWS_AS(parse_table_id("table9"), Error);
}

TEST_CASE("table grids") {
  SimConfig base;
  const auto t1 = table_grid(TableId::Table1, base);
  CHECK(t1.size() == 12);
  for (const auto& c : t1) {
    CHECK(c.design.kind == Design::Kind::Baseline);
    CHECK(c.rho1 == c.rho0);
  }
  const auto t3 = table_grid(TableId::Table3, base);
  CHECK(t3.size() == 12);
  for (const auto& c : t3) {
    CHECK(c.n == 1000);
    CHECK(c.design.kind == Design::Kind::ThresholdK);
  }
  for (const auto& c : table_grid(TableId::Table4, base)) CHECK(c.n == 4000);
  CHECK(table_grid(TableId::Table2, base).size() == 3);
}

TEST_CASE("simulation report round-trips through json") {
  SimConfig c;
  c.n = 200;
  c.reps = 20;
  c.rho1 = 0.5;
  c.rho0 = -0.25;
  c.design = Design::threshold(-0.25);
  const SimReport r = run_monte_carlo(c, 1);
  REQUIRE(r.failed_reps < c.reps);
  const SimReport back = sim_report_from_json(sim_report_to_json(r));
  CHECK(back == r);

  const std::vector<SimReport> reports = {r, r};
  const json j = json::parse(render_simulation(reports, OutputFormat::Json, TableId::Table3));
  CHECK(j["meta"]["table"] == "table3");
  CHECK(j["reports"].size() == 2);
  const std::string csv = render_simulation(reports, OutputFormat::Csv);
  CHECK(csv.find("theta_zw_bias") != std::string::npos);
  CHECK(!render_simulation(reports, OutputFormat::Markdown, TableId::Table3).empty());
}
