#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absa/stats.hpp"

namespace absa {

/// Deterministic, dependency-free SVG charts. The same input always renders
/// byte-identical markup, so chart files can be diffed and golden-tested.

struct ChartSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;  // (x, y)
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<ChartSeries> series;
  /// Horizontal reference lines, drawn dashed with their value printed at the
  /// right edge.
  std::vector<double> guides;
  /// Explicit y range; deduced from data and guides when absent.
  std::optional<std::pair<double, double>> y_range;
};

struct BoxplotChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<std::string> labels;  // one category label per box
  std::vector<BoxplotSummary> boxes;
  /// Index of a box to accent (the calibrated value in a parameter sweep).
  std::optional<std::size_t> highlight;
};

struct ScatterChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<std::pair<double, double>> points;
  /// Free-form note drawn inside the plot, such as a correlation summary.
  std::string annotation;
};

std::string render_line_chart(const LineChart& chart);
std::string render_boxplot_chart(const BoxplotChart& chart);
std::string render_scatter_chart(const ScatterChart& chart);

/// Shortest decimal text that parses back to exactly this double.
std::string format_double(double value);

/// Escapes &, <, >, and quotes for use in SVG text and attributes.
std::string escape_xml(const std::string& text);

}  // namespace absa
