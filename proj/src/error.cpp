#include "dualiv/error.hpp"

#include <sstream>
#include <utility>

namespace dualiv {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NonBinary: return "NonBinary";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::Empty: return "Empty";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Io: return "Io";
    case ErrorCode::EmptyCell: return "EmptyCell";
    case ErrorCode::WeakRelevance: return "WeakRelevance";
    case ErrorCode::WeakComplierShare: return "WeakComplierShare";
    case ErrorCode::EmptyComplierSet: return "EmptyComplierSet";
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::InvalidLevel: return "InvalidLevel";
    case ErrorCode::NegativeCap: return "NegativeCap";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

ErrorCategory error_category(ErrorCode code) noexcept {
  const int value = static_cast<int>(code);
  if (value < 30) return ErrorCategory::Input;
  if (value < 40) return ErrorCategory::Estimation;
  return ErrorCategory::Config;
}

int exit_status(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::Input: return 2;
    case ErrorCategory::Estimation: return 3;
    case ErrorCategory::Config: return 4;
  }
  return 1;
}

Error::Error(ErrorCode code, const std::string& message, ErrorDetail detail)
    : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

Error Error::with_component(std::string component) const {
  if (!detail_.component.empty()) return *this;
  ErrorDetail detail = detail_;
  detail.component = std::move(component);
  return Error(code_, what(), std::move(detail));
}

Error empty_cell_error(int z, std::optional<int> w, std::string component) {
  std::ostringstream msg;
  if (w) {
    msg << "no observations in cell (Z=" << z << ", W=" << *w << ")";
  } else {
    msg << "no observations with Z=" << z;
  }
  ErrorDetail detail;
  detail.z = z;
  detail.w = w;
  detail.component = std::move(component);
  return Error(ErrorCode::EmptyCell, msg.str(), std::move(detail));
}

Error weak_relevance_error(std::string component, double magnitude, double tol) {
  std::ostringstream msg;
  msg << "denominator for " << component << " has magnitude " << magnitude
      << " (threshold " << tol << ")";
  ErrorDetail detail;
  detail.component = std::move(component);
  return Error(ErrorCode::WeakRelevance, msg.str(), std::move(detail));
}

}  // namespace dualiv
