#pragma once

// Row-oriented result tables and their CSV / JSON encodings. Numbers are
// written in shortest round-trip form so identical values always produce
// identical bytes.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace srlab::harness {

using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Throws schema_mismatch when the row width differs from the header.
  void add_row(std::vector<Cell> row);
  std::size_t column_index(const std::string& name) const;  // throws schema_mismatch
};

/// Shortest round-trip decimal; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double value);
std::string format_cell(const Cell& cell);

void write_csv(std::ostream& out, const Table& table);
/// Array of row objects; empty cells and non-finite numbers become null.
void write_json(std::ostream& out, const Table& table);

/// Plain CSV reader (no quoting; the writer never emits separators inside
/// cells). Every row must have the header's width.
struct CsvData {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
CsvData parse_csv(const std::string& text);
CsvData read_csv(const std::string& path);

}  // namespace srlab::harness
