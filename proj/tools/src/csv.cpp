#include "rabiphase_cli/csv.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace rabiphase::cli {

std::string format_number(double x) {
  if (std::isnan(x)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string sanitize_cell(std::string s) {
  for (char& c : s) {
    if (c == ',') c = ';';
    if (c == '"') c = '\'';
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

namespace {

void write_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) os << ',';
    os << cells[i];
  }
  os << '\n';
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

void write_csv(std::ostream& os, const CsvDocument& doc) {
  for (const auto& c : doc.comments) os << "# " << c << '\n';
  write_row(os, doc.header);
  for (const auto& r : doc.rows) write_row(os, r);
}

CsvDocument parse_csv(std::istream& is) {
  CsvDocument doc;
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (!have_header && line.rfind("# ", 0) == 0) {
      doc.comments.push_back(line.substr(2));
    } else if (!have_header) {
      doc.header = split_row(line);
      have_header = true;
    } else {
      doc.rows.push_back(split_row(line));
    }
  }
  return doc;
}

CsvDocument renormalize_numbers(const CsvDocument& doc) {
  CsvDocument out = doc;
  for (auto& row : out.rows) {
    for (auto& cell : row) {
      if (cell.empty()) continue;
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() + cell.size()) cell = format_number(v);
    }
  }
  return out;
}

}  // namespace rabiphase::cli
