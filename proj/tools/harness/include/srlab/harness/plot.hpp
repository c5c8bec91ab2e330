#pragma once

// Minimal SVG line charts: one polyline per series, linear axes with five
// ticks each.

#include <string>
#include <utility>
#include <vector>

namespace srlab::harness {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
  bool dashed = false;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

/// Non-finite points are dropped. An empty plot still renders axes.
std::string render_svg(const Plot& plot);

}  // namespace srlab::harness
