#pragma once

// Minimal CSV document: `#` comment lines, one header row, string cells. Cells never
// contain commas, quotes or newlines, so no quoting is needed.

#include <iosfwd>
#include <string>
#include <vector>

namespace rabiphase::cli {

struct CsvDocument {
  std::vector<std::string> comments;  // without the leading "# "
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// %.12g; NaN maps to an empty cell.
std::string format_number(double x);

/// Replaces characters that would break a cell.
std::string sanitize_cell(std::string s);

void write_csv(std::ostream& os, const CsvDocument& doc);
CsvDocument parse_csv(std::istream& is);

/// Parses every numeric cell and formats it again with format_number.
CsvDocument renormalize_numbers(const CsvDocument& doc);

}  // namespace rabiphase::cli
