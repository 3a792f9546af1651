#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dualiv/error.hpp"
#include "dualiv/io.hpp"

namespace dualiv {
namespace {

constexpr std::array<std::string_view, 4> kColumns{"y", "d", "z", "w"};

Error parse_error(std::size_t row, std::string_view column, const std::string& why) {
  std::ostringstream msg;
  msg << "row " << row << ", column " << column << ": " << why;
  ErrorDetail detail;
  detail.row = row;
  detail.column = std::string(column);
  return Error(ErrorCode::ParseError, msg.str(), std::move(detail));
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return out;
}

}  // namespace

Sample parse_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  // A terminating newline leaves one empty trailing line.
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw Error(ErrorCode::MissingColumn, "input has no header row");

  // position[k] = field index of kColumns[k]
  std::array<std::size_t, 4> position{};
  std::array<bool, 4> seen{};
  const auto header = split_fields(lines.front());
  for (std::size_t f = 0; f < header.size(); ++f) {
    const std::string name = lower(header[f]);
    const auto it = std::find(kColumns.begin(), kColumns.end(), name);
    if (it == kColumns.end()) {
      throw parse_error(1, header[f], "unknown column; expected y, d, z, w");
    }
    const auto k = static_cast<std::size_t>(it - kColumns.begin());
    if (seen[k]) throw parse_error(1, header[f], "duplicate column");
    seen[k] = true;
    position[k] = f;
  }
  for (std::size_t k = 0; k < kColumns.size(); ++k) {
    if (!seen[k]) {
      ErrorDetail detail;
      detail.column = std::string(kColumns[k]);
      throw Error(ErrorCode::MissingColumn,
                  "header is missing column " + std::string(kColumns[k]), std::move(detail));
    }
  }

  const std::size_t rows = lines.size() - 1;
  std::vector<double> y;
  std::vector<int> d, z, w;
  y.reserve(rows);
  d.reserve(rows);
  z.reserve(rows);
  w.reserve(rows);

  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::size_t row = r + 1;
    const auto fields = split_fields(lines[r]);
    if (fields.size() != header.size()) {
      std::ostringstream why;
      why << "expected " << header.size() << " fields, found " << fields.size();
      throw parse_error(row, "*", why.str());
    }

    const std::string_view ytext = fields[position[0]];
    double yv = 0.0;
    const auto [ptr, ec] = std::from_chars(ytext.data(), ytext.data() + ytext.size(), yv);
    if (ytext.empty() || ec != std::errc() || ptr != ytext.data() + ytext.size()) {
      throw parse_error(row, "y", "not a decimal number: '" + std::string(ytext) + "'");
    }
    if (!std::isfinite(yv)) {
      ErrorDetail detail;
      detail.row = row;
      detail.column = "y";
      throw Error(ErrorCode::NonFinite,
                  "row " + std::to_string(row) + ", column y: value is not finite",
                  std::move(detail));
    }
    y.push_back(yv);

    for (std::size_t k = 1; k < 4; ++k) {
      const std::string_view v = fields[position[k]];
      if (v != "0" && v != "1") {
        throw parse_error(row, kColumns[k], "expected 0 or 1, found '" + std::string(v) + "'");
      }
      auto& column = k == 1 ? d : (k == 2 ? z : w);
      column.push_back(v == "1" ? 1 : 0);
    }
  }

  return Sample::validate(std::move(y), std::move(d), std::move(z), std::move(w));
}

Sample load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str());
}

}  // namespace dualiv
