#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dualiv {

// Numeric values are part of the CLI contract (reported as "subcode").
enum class ErrorCode : int {
  // input errors
  LengthMismatch = 20,
  NonBinary = 21,
  NonFinite = 22,
  Empty = 23,
  MissingColumn = 24,
  ParseError = 25,
  Io = 26,
  // estimation errors
  EmptyCell = 30,
  WeakRelevance = 31,
  WeakComplierShare = 32,
  EmptyComplierSet = 33,
  EmptySequence = 34,
  // configuration errors
  InvalidLevel = 40,
  NegativeCap = 41,
  InvalidConfig = 42,
};

enum class ErrorCategory { Input, Estimation, Config };

std::string_view error_name(ErrorCode code) noexcept;
ErrorCategory error_category(ErrorCode code) noexcept;

// Process exit status for a category: 2 input, 3 estimation, 4 config.
int exit_status(ErrorCategory category) noexcept;

// Optional location details attached to an error.
struct ErrorDetail {
  std::optional<int> z;             // EmptyCell
  std::optional<int> w;             // EmptyCell
  std::optional<std::size_t> row;   // ParseError, 1-based file line
  std::string column;               // ParseError, MissingColumn
  std::string component;            // which estimator / denominator failed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, ErrorDetail detail = {});

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return error_category(code_); }
  const ErrorDetail& detail() const noexcept { return detail_; }

  // Returns a copy whose component is set (if not already) to `component`.
  Error with_component(std::string component) const;

 private:
  ErrorCode code_;
  ErrorDetail detail_;
};

// w == nullopt means the whole Z = z group is empty.
Error empty_cell_error(int z, std::optional<int> w, std::string component = {});
Error weak_relevance_error(std::string component, double magnitude, double tol);

}  // namespace dualiv
