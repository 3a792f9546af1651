#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "dualiv/error.hpp"
#include "dualiv/sample.hpp"
#include "support/fixtures.hpp"

using namespace dualiv;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected dualiv::Error");
  return ErrorCode::InvalidConfig;
}

}  // namespace

TEST_CASE("validation rejects malformed columns") {
  CHECK(code_of([] { Sample::validate({1.0, 2.0}, {0}, {0, 1}, {0, 1}); }) ==
        ErrorCode::LengthMismatch);
  CHECK(code_of([] { Sample::validate({}, {}, {}, {}); }) == ErrorCode::Empty);
  CHECK(code_of([] {
          Sample::validate({std::numeric_limits<double>::quiet_NaN()}, {0}, {0}, {0});
        }) == ErrorCode::NonFinite);
  CHECK(code_of([] {
          Sample::validate({std::numeric_limits<double>::infinity()}, {0}, {0}, {0});
        }) == ErrorCode::NonFinite);
  CHECK(code_of([] { Sample::validate({1.0}, {2}, {0}, {0}); }) == ErrorCode::NonBinary);
  CHECK(code_of([] { Sample::validate({1.0}, {0}, {-1}, {0}); }) == ErrorCode::NonBinary);
}

TEST_CASE("non-binary error names the column and row") {
  try {
    Sample::validate({1.0, 1.0, 1.0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 3});
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonBinary);
    CHECK(e.detail().column == "w");
    REQUIRE(e.detail().row.has_value());
  }
}

TEST_CASE("error categories map to exit statuses") {
  CHECK(exit_status(error_category(ErrorCode::ParseError)) == 2);
  CHECK(exit_status(error_category(ErrorCode::EmptyCell)) == 3);
  CHECK(exit_status(error_category(ErrorCode::WeakRelevance)) == 3);
  CHECK(exit_status(error_category(ErrorCode::InvalidLevel)) == 4);
  CHECK(exit_status(error_category(ErrorCode::NegativeCap)) == 4);
}

TEST_CASE("cell counts of the eight-row fixture") {
  const Sample s = testing::e1_y_equals_d();
  const CellCounts c = cell_counts(s);
  CHECK(c.count[0][1] == 2);
  CHECK(c.count[1][1] == 4);
  CHECK(c.count[1][0] == 1);
  CHECK(c.count[0][0] == 1);
  CHECK(c.treated_count[1][1] == 3);
  CHECK(c.treated_count[0][1] == 1);
  CHECK(c.total() == 8);
  CHECK(c.total_treated() == 5);
}

TEST_CASE("restriction, row selection and outcome maps") {
  const Sample s = testing::e1_y_equals_d();
  const Sample w1 = s.restrict_to_w(1);
  CHECK(w1.size() == 6);
  for (auto v : w1.w()) CHECK(v == 1);

  const std::vector<std::size_t> rows = {0, 0, 7};
  const Sample t = s.take(rows);
  CHECK(t.size() == 3);
  CHECK(t.d()[0] == 1);
  CHECK(t.d()[1] == 1);
  CHECK(t.z()[2] == 0);

  const Sample shifted = s.map_outcome([](double y) { return y + 3.0; });
  CHECK(shifted.y()[0] == 4.0);
  CHECK_FALSE(shifted == s);
  CHECK(s.map_outcome([](double y) { return y; }) == s);
}
