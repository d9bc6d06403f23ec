#include "absa/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

namespace absa {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 76.0;
constexpr double kRight = 28.0;
constexpr double kTop = 48.0;
constexpr double kBottom = 64.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

struct Extent {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void include(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool valid() const { return lo <= hi; }
};

Range pad_range(const Extent& e) {
  if (!e.valid()) return {0.0, 1.0};
  double lo = e.lo;
  double hi = e.hi;
  if (lo == hi) {
    const double d = std::max(std::abs(lo) * 0.1, 1.0);
    return {lo - d, hi + d};
  }
  const double d = (hi - lo) * 0.05;
  return {lo - d, hi + d};
}

std::string px(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_text(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.5g", v);
  return buf;
}

double map_x(double v, const Range& r) {
  const double span = r.hi - r.lo;
  const double t = span == 0.0 ? 0.5 : (v - r.lo) / span;
  return kLeft + t * (kWidth - kLeft - kRight);
}

double map_y(double v, const Range& r) {
  const double span = r.hi - r.lo;
  const double t = span == 0.0 ? 0.5 : (v - r.lo) / span;
  return kHeight - kBottom - t * (kHeight - kTop - kBottom);
}

class SvgBuilder {
 public:
  SvgBuilder() {
    body_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
             "viewBox=\"0 0 720 480\" font-family=\"Helvetica, Arial, sans-serif\">\n";
    body_ += "<rect x=\"0\" y=\"0\" width=\"720\" height=\"480\" fill=\"#ffffff\"/>\n";
  }

  void line(double x1, double y1, double x2, double y2, const std::string& stroke,
            double width = 1.0, const char* dash = nullptr) {
    body_ += "<line x1=\"" + px(x1) + "\" y1=\"" + px(y1) + "\" x2=\"" + px(x2) + "\" y2=\"" +
             px(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" + px(width) + "\"";
    if (dash) body_ += std::string(" stroke-dasharray=\"") + dash + "\"";
    body_ += "/>\n";
  }

  void rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& stroke) {
    body_ += "<rect x=\"" + px(x) + "\" y=\"" + px(y) + "\" width=\"" + px(w) + "\" height=\"" +
             px(h) + "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\"/>\n";
  }

  void circle(double cx, double cy, double r, const std::string& fill) {
    body_ += "<circle cx=\"" + px(cx) + "\" cy=\"" + px(cy) + "\" r=\"" + px(r) + "\" fill=\"" +
             fill + "\"/>\n";
  }

  void text(double x, double y, const std::string& content, const char* anchor = "middle",
            double size = 12.0, const std::string& fill = "#000000") {
    body_ += "<text x=\"" + px(x) + "\" y=\"" + px(y) + "\" font-size=\"" + px(size) +
             "\" text-anchor=\"" + anchor + "\" fill=\"" + fill + "\">" + escape_xml(content) +
             "</text>\n";
  }

  void rotated_text(double x, double y, const std::string& content, double size = 12.0) {
    body_ += "<text transform=\"translate(" + px(x) + "," + px(y) +
             ") rotate(-90)\" font-size=\"" + px(size) +
             "\" text-anchor=\"middle\" fill=\"#000000\">" + escape_xml(content) + "</text>\n";
  }

  void raw(const std::string& markup) { body_ += markup; }

  std::string finish() { return body_ + "</svg>\n"; }

 private:
  std::string body_;
};

void draw_frame(SvgBuilder& svg, const std::string& title, const std::string& x_label,
                const std::string& y_label) {
  svg.text(kWidth / 2.0, 28.0, title, "middle", 16.0);
  svg.text((kLeft + kWidth - kRight) / 2.0, kHeight - 14.0, x_label);
  svg.rotated_text(22.0, (kTop + kHeight - kBottom) / 2.0, y_label);
  svg.line(kLeft, kHeight - kBottom, kWidth - kRight, kHeight - kBottom, "#000000");
  svg.line(kLeft, kTop, kLeft, kHeight - kBottom, "#000000");
}

void draw_y_ticks(SvgBuilder& svg, const Range& range) {
  for (int i = 0; i <= 4; ++i) {
    const double v = range.lo + (range.hi - range.lo) * (static_cast<double>(i) / 4.0);
    const double y = map_y(v, range);
    svg.line(kLeft - 5.0, y, kLeft, y, "#000000");
    svg.text(kLeft - 9.0, y + 4.0, tick_text(v), "end", 11.0);
  }
}

void draw_x_ticks(SvgBuilder& svg, const Range& range) {
  for (int i = 0; i <= 4; ++i) {
    const double v = range.lo + (range.hi - range.lo) * (static_cast<double>(i) / 4.0);
    const double x = map_x(v, range);
    svg.line(x, kHeight - kBottom, x, kHeight - kBottom + 5.0, "#000000");
    svg.text(x, kHeight - kBottom + 19.0, tick_text(v), "middle", 11.0);
  }
}

void draw_guides(SvgBuilder& svg, const std::vector<double>& guides, const Range& y_range) {
  for (double g : guides) {
    if (!std::isfinite(g) || g < y_range.lo || g > y_range.hi) continue;
    const double y = map_y(g, y_range);
    svg.line(kLeft, y, kWidth - kRight, y, "#999999", 1.0, "6 4");
    svg.text(kWidth - kRight - 4.0, y - 4.0, tick_text(g), "end", 11.0, "#666666");
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

std::string escape_xml(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string render_line_chart(const LineChart& chart) {
  Extent ex, ey;
  for (const auto& s : chart.series) {
    for (const auto& [x, y] : s.points) {
      ex.include(x);
      ey.include(y);
    }
  }
  if (!chart.y_range) {
    for (double g : chart.guides) ey.include(g);
  }
  const Range x_range = pad_range(ex);
  Range y_range = pad_range(ey);
  if (chart.y_range) y_range = {chart.y_range->first, chart.y_range->second};

  SvgBuilder svg;
  draw_frame(svg, chart.title, chart.x_label, chart.y_label);
  draw_x_ticks(svg, x_range);
  draw_y_ticks(svg, y_range);
  draw_guides(svg, chart.guides, y_range);

  for (std::size_t s = 0; s < chart.series.size(); ++s) {
    const auto& series = chart.series[s];
    const std::string color = kPalette[s % kPaletteSize];
    if (series.points.size() > 1) {
      std::string points;
      for (const auto& [x, y] : series.points) {
        if (!points.empty()) points += ' ';
        points += px(map_x(x, x_range)) + "," + px(map_y(y, y_range));
      }
      svg.raw("<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2.00\" points=\"" +
              points + "\"/>\n");
    }
    for (const auto& [x, y] : series.points)
      svg.circle(map_x(x, x_range), map_y(y, y_range), 3.0, color);
  }

  // Legend, one row per named series, anchored to the top-right corner.
  double legend_y = kTop + 14.0;
  for (std::size_t s = 0; s < chart.series.size(); ++s) {
    if (chart.series[s].name.empty()) continue;
    const std::string color = kPalette[s % kPaletteSize];
    const double x0 = kWidth - kRight - 130.0;
    svg.line(x0, legend_y - 4.0, x0 + 22.0, legend_y - 4.0, color, 2.0);
    svg.text(x0 + 28.0, legend_y, chart.series[s].name, "start", 11.0);
    legend_y += 16.0;
  }
  return svg.finish();
}

std::string render_boxplot_chart(const BoxplotChart& chart) {
  Extent ey;
  for (const auto& box : chart.boxes) {
    ey.include(box.whisker_low);
    ey.include(box.whisker_high);
    ey.include(box.q1);
    ey.include(box.q3);
    ey.include(box.median);
    for (double outlier : box.outliers) ey.include(outlier);
  }
  const Range y_range = pad_range(ey);

  SvgBuilder svg;
  draw_frame(svg, chart.title, chart.x_label, chart.y_label);
  draw_y_ticks(svg, y_range);

  const std::size_t count = std::max<std::size_t>(chart.boxes.size(), 1);
  const double slot = (kWidth - kLeft - kRight) / static_cast<double>(count);
  const double half = std::min(26.0, slot * 0.3);

  for (std::size_t i = 0; i < chart.boxes.size(); ++i) {
    const auto& box = chart.boxes[i];
    const double cx = kLeft + (static_cast<double>(i) + 0.5) * slot;
    const bool accent = chart.highlight && *chart.highlight == i;
    const std::string stroke = accent ? "#d62728" : "#1f77b4";
    const std::string fill = accent ? "#fbe5e5" : "#e8f1fa";

    const double y_low = map_y(box.whisker_low, y_range);
    const double y_high = map_y(box.whisker_high, y_range);
    const double y_q1 = map_y(box.q1, y_range);
    const double y_q3 = map_y(box.q3, y_range);
    const double y_med = map_y(box.median, y_range);

    svg.line(cx, y_low, cx, y_q1, stroke);
    svg.line(cx, y_q3, cx, y_high, stroke);
    svg.line(cx - half * 0.6, y_low, cx + half * 0.6, y_low, stroke);
    svg.line(cx - half * 0.6, y_high, cx + half * 0.6, y_high, stroke);
    svg.rect(cx - half, y_q3, 2.0 * half, y_q1 - y_q3, fill, stroke);
    svg.line(cx - half, y_med, cx + half, y_med, stroke, 2.0);
    for (double outlier : box.outliers)
      svg.circle(cx, map_y(outlier, y_range), 2.5, stroke);

    if (i < chart.labels.size())
      svg.text(cx, kHeight - kBottom + 19.0, chart.labels[i], "middle", 11.0);
    svg.line(cx, kHeight - kBottom, cx, kHeight - kBottom + 5.0, "#000000");
  }
  return svg.finish();
}

std::string render_scatter_chart(const ScatterChart& chart) {
  Extent ex, ey;
  for (const auto& [x, y] : chart.points) {
    ex.include(x);
    ey.include(y);
  }
  const Range x_range = pad_range(ex);
  const Range y_range = pad_range(ey);

  SvgBuilder svg;
  draw_frame(svg, chart.title, chart.x_label, chart.y_label);
  draw_x_ticks(svg, x_range);
  draw_y_ticks(svg, y_range);

  for (const auto& [x, y] : chart.points)
    svg.circle(map_x(x, x_range), map_y(y, y_range), 3.0, "#1f77b4");

  if (!chart.annotation.empty())
    svg.text(kLeft + 12.0, kTop + 16.0, chart.annotation, "start", 12.0, "#333333");
  return svg.finish();
}

}  // namespace absa
