#pragma once

// Column-wise comparison of two CSV result files.

#include "srlab/harness/table.hpp"

#include <string>
#include <vector>

namespace srlab::harness {

struct ColumnDeviation {
  std::string column;
  bool numeric = true;     // false when any cell failed to parse as a number
  double max_rel = 0.0;    // max |a-b| / max(|a|,|b|); 0 when both are 0
  std::size_t worst_row = 0;
};

struct CompareReport {
  double tolerance = 0.0;
  std::size_t rows = 0;
  std::vector<ColumnDeviation> columns;

  bool pass() const;
  /// Columns whose deviation exceeds the tolerance, in header order.
  std::vector<std::string> failing() const;
};

/// Throws schema_mismatch when headers or row counts differ. Text cells are
/// compared for equality (deviation 0 or infinity); NaN matches NaN.
CompareReport compare_csv(const CsvData& a, const CsvData& b, double tolerance);
CompareReport compare_csv_files(const std::string& path_a, const std::string& path_b, double tolerance);

Table report_table(const CompareReport& report);

}  // namespace srlab::harness
