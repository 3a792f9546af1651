#include "dualiv/sample.hpp"

#include <cmath>
#include <sstream>

#include "dualiv/error.hpp"

namespace dualiv {
namespace {

std::vector<std::uint8_t> to_binary(const std::vector<int>& values, const char* column) {
  std::vector<std::uint8_t> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const int v = values[i];
    if (v != 0 && v != 1) {
      std::ostringstream msg;
      msg << "column " << column << " has value " << v << " at index " << i
          << "; expected 0 or 1";
      ErrorDetail detail;
      detail.column = column;
      detail.row = i;
      throw Error(ErrorCode::NonBinary, msg.str(), std::move(detail));
    }
    out.push_back(static_cast<std::uint8_t>(v));
  }
  return out;
}

}  // namespace

Sample Sample::validate(std::vector<double> y, std::vector<int> d, std::vector<int> z,
                        std::vector<int> w) {
  const std::size_t n = y.size();
  if (d.size() != n || z.size() != n || w.size() != n) {
    std::ostringstream msg;
    msg << "column lengths differ: y=" << n << " d=" << d.size() << " z=" << z.size()
        << " w=" << w.size();
    throw Error(ErrorCode::LengthMismatch, msg.str());
  }
  if (n == 0) throw Error(ErrorCode::Empty, "sample has no observations");

  Sample s;
  s.y_ = std::move(y);
  s.check_finite();
  s.d_ = to_binary(d, "d");
  s.z_ = to_binary(z, "z");
  s.w_ = to_binary(w, "w");
  return s;
}

void Sample::check_finite() const {
  for (std::size_t i = 0; i < y_.size(); ++i) {
    if (!std::isfinite(y_[i])) {
      std::ostringstream msg;
      msg << "outcome y is not finite at index " << i;
      ErrorDetail detail;
      detail.column = "y";
      detail.row = i;
      throw Error(ErrorCode::NonFinite, msg.str(), std::move(detail));
    }
  }
}

Sample Sample::restrict_to_w(int w_value) const {
  Sample out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (w_[i] != w_value) continue;
    out.y_.push_back(y_[i]);
    out.d_.push_back(d_[i]);
    out.z_.push_back(z_[i]);
    out.w_.push_back(w_[i]);
  }
  if (out.size() == 0) throw Error(ErrorCode::Empty, "no observations with requested W");
  return out;
}

Sample Sample::take(std::span<const std::size_t> rows) const {
  if (rows.empty()) throw Error(ErrorCode::Empty, "empty row selection");
  Sample out;
  out.y_.reserve(rows.size());
  out.d_.reserve(rows.size());
  out.z_.reserve(rows.size());
  out.w_.reserve(rows.size());
  for (const std::size_t i : rows) {
    out.y_.push_back(y_.at(i));
    out.d_.push_back(d_[i]);
    out.z_.push_back(z_[i]);
    out.w_.push_back(w_[i]);
  }
  return out;
}

std::size_t CellCounts::total() const noexcept {
  return count[0][0] + count[0][1] + count[1][0] + count[1][1];
}

std::size_t CellCounts::total_treated() const noexcept {
  return treated_count[0][0] + treated_count[0][1] + treated_count[1][0] +
         treated_count[1][1];
}

CellCounts cell_counts(const Sample& sample) noexcept {
  CellCounts c;
  const auto d = sample.d();
  const auto z = sample.z();
  const auto w = sample.w();
  for (std::size_t i = 0; i < sample.size(); ++i) {
    ++c.count[z[i]][w[i]];
    c.treated_count[z[i]][w[i]] += d[i];
  }
  return c;
}

}  // namespace dualiv
