#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "eppv/logistic.hpp"

namespace eppv {

struct ColumnSpec {
  std::string response;
  std::vector<std::string> null_columns;
  std::string test_column;
  bool add_intercept = true;
};

/// Parses comma-separated text with a header row into a Dataset. LF and CRLF
/// line endings are both accepted and a leading UTF-8 byte-order mark is
/// ignored. An all-ones intercept column is prepended to the null design
/// unless `spec.add_intercept` is false.
///
/// Errors carry 1-based coordinates, with row 1 being the first data line:
/// EmptyFile, MissingColumn, NonNumericCell(row, column),
/// NonBinaryResponse(row), DataError for ragged rows or repeated columns.
Dataset parse_dataset_csv_text(std::string_view text, const ColumnSpec& spec);

/// Reads `path` and forwards to parse_dataset_csv_text.
Dataset parse_dataset_csv(const std::string& path, const ColumnSpec& spec);

}  // namespace eppv
