#include "eppv/dataset_csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "eppv/errors.hpp"

namespace eppv {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto end = text.find('\n');
    std::string_view line = text.substr(0, end);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == std::string_view::npos) break;
    text.remove_prefix(end + 1);
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  while (true) {
    const auto comma = line.find(',');
    cells.push_back(trim(line.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return cells;
}

std::string unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

double parse_number(std::string_view cell, std::size_t row, std::size_t column) {
  double value = 0.0;
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw NonNumericCell("non-numeric cell '" + std::string(cell) + "' at row " +
                             std::to_string(row) + ", column " + std::to_string(column),
                         row, column);
  }
  return value;
}

}  // namespace

Dataset parse_dataset_csv_text(std::string_view text, const ColumnSpec& spec) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  const auto lines = split_lines(text);
  if (lines.empty()) throw EmptyFile("file is empty");
  if (lines.size() < 2) throw EmptyFile("file has a header but no data rows");

  std::vector<std::string> header;
  for (auto cell : split_cells(lines.front())) header.push_back(unquote(cell));

  auto column_index = [&](const std::string& name) -> std::size_t {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw MissingColumn("column '" + name + "' not found in header");
    return static_cast<std::size_t>(it - header.begin());
  };

  std::vector<std::string> requested = {spec.response};
  requested.insert(requested.end(), spec.null_columns.begin(), spec.null_columns.end());
  requested.push_back(spec.test_column);
  if (std::set<std::string>(requested.begin(), requested.end()).size() != requested.size()) {
    throw DataError("response, null and test columns must be distinct");
  }

  const std::size_t response_col = column_index(spec.response);
  const std::size_t test_col = column_index(spec.test_column);
  std::vector<std::size_t> null_cols;
  for (const auto& name : spec.null_columns) null_cols.push_back(column_index(name));

  const auto n = static_cast<Eigen::Index>(lines.size() - 1);
  const Eigen::Index offset = spec.add_intercept ? 1 : 0;
  Dataset data;
  data.y.resize(n);
  data.tested.resize(n);
  data.null_design.resize(n, offset + static_cast<Eigen::Index>(null_cols.size()));

  for (Eigen::Index i = 0; i < n; ++i) {
    const auto row = static_cast<std::size_t>(i) + 1;
    const auto cells = split_cells(lines[row]);
    if (cells.size() != header.size()) {
      throw DataError("row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                          " cells, header has " + std::to_string(header.size()),
                      row);
    }
    const double y = parse_number(cells[response_col], row, response_col + 1);
    if (y != 0.0 && y != 1.0) {
      throw NonBinaryResponse("response at row " + std::to_string(row) + " is not 0/1", row,
                              response_col + 1);
    }
    data.y[i] = y;
    data.tested[i] = parse_number(cells[test_col], row, test_col + 1);
    if (spec.add_intercept) data.null_design(i, 0) = 1.0;
    for (std::size_t k = 0; k < null_cols.size(); ++k) {
      data.null_design(i, offset + static_cast<Eigen::Index>(k)) =
          parse_number(cells[null_cols[k]], row, null_cols[k] + 1);
    }
  }
  return data;
}

Dataset parse_dataset_csv(const std::string& path, const ColumnSpec& spec) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_dataset_csv_text(buffer.str(), spec);
}

}  // namespace eppv
