#include "srlab/harness/compare.hpp"

#include "srlab/error.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <optional>

namespace srlab::harness {

namespace {

std::optional<double> parse_number(const std::string& text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto result = std::from_chars(text.data(), end, value);
  if (result.ec != std::errc{} || result.ptr != end || text.empty()) return std::nullopt;
  return value;
}

double relative_deviation(double a, double b) {
  if (std::isnan(a) && std::isnan(b)) return 0.0;
  if (a == b) return 0.0;  // covers equal infinities
  if (!std::isfinite(a) || !std::isfinite(b)) return std::numeric_limits<double>::infinity();
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

}  // namespace

bool CompareReport::pass() const { return failing().empty(); }

std::vector<std::string> CompareReport::failing() const {
  std::vector<std::string> out;
  for (const auto& c : columns) {
    if (!(c.max_rel <= tolerance)) out.push_back(c.column);
  }
  return out;
}

CompareReport compare_csv(const CsvData& a, const CsvData& b, double tolerance) {
  if (a.header != b.header) {
    std::string detail;
    for (std::size_t i = 0; i < std::max(a.header.size(), b.header.size()); ++i) {
      const std::string x = i < a.header.size() ? a.header[i] : "<none>";
      const std::string y = i < b.header.size() ? b.header[i] : "<none>";
      if (x != y) {
        detail = "column " + std::to_string(i) + ": '" + x + "' vs '" + y + "'";
        break;
      }
    }
    throw Error(Errc::schema_mismatch, "headers differ (" + detail + ")");
  }
  if (a.rows.size() != b.rows.size()) {
    throw Error(Errc::schema_mismatch,
                "row counts differ: " + std::to_string(a.rows.size()) + " vs " + std::to_string(b.rows.size()));
  }
  CompareReport report;
  report.tolerance = tolerance;
  report.rows = a.rows.size();
  for (std::size_t c = 0; c < a.header.size(); ++c) {
    ColumnDeviation dev;
    dev.column = a.header[c];
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
      const auto& x = a.rows[r][c];
      const auto& y = b.rows[r][c];
      double d = 0.0;
      const auto nx = parse_number(x);
      const auto ny = parse_number(y);
      if (nx && ny) {
        d = relative_deviation(*nx, *ny);
      } else {
        if (!x.empty() || !y.empty()) dev.numeric = dev.numeric && (nx || x.empty()) && (ny || y.empty());
        d = x == y ? 0.0 : std::numeric_limits<double>::infinity();
      }
      if (d > dev.max_rel) {
        dev.max_rel = d;
        dev.worst_row = r;
      }
    }
    report.columns.push_back(dev);
  }
  return report;
}

CompareReport compare_csv_files(const std::string& path_a, const std::string& path_b, double tolerance) {
  return compare_csv(read_csv(path_a), read_csv(path_b), tolerance);
}

Table report_table(const CompareReport& report) {
  Table t;
  t.columns = {"column", "kind", "max_rel_deviation", "worst_row", "tolerance", "status"};
  for (const auto& c : report.columns) {
    t.add_row({c.column, std::string(c.numeric ? "numeric" : "text"), c.max_rel,
               static_cast<std::int64_t>(c.worst_row), report.tolerance,
               std::string(c.max_rel <= report.tolerance ? "ok" : "FAIL")});
  }
  return t;
}

}  // namespace srlab::harness
