#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace hebblsys::svg {

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct LineChart {
  std::string title;
  std::string x_label = "generation";
  std::string y_label = "food";
  std::vector<Series> series;
};

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

/// Self-contained 800x500 chart: one polyline per series, linear axes, legend.
inline std::string render(const LineChart& chart) {
  constexpr double kWidth = 800, kHeight = 500;
  constexpr double kLeft = 70, kRight = 180, kTop = 40, kBottom = 50;
  static const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                         "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  bool any = false;
  for (const auto& s : chart.series) {
    for (const auto& [x, y] : s.points) {
      if (!any) {
        x_min = x_max = x;
        y_max = y;
        any = true;
      }
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_max = std::max(y_max, y);
    }
  }
  if (x_max <= x_min) x_max = x_min + 1;
  if (y_max <= y_min) y_max = y_min + 1;
  const double plot_w = kWidth - kLeft - kRight, plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) { return kTop + plot_h - (y - y_min) / (y_max - y_min) * plot_h; };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 500\" width=\"800\" height=\"500\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";
  out += "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" + escape(chart.title) +
         "</text>\n";
  out += "<g stroke=\"black\" stroke-width=\"1\">\n";
  out += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kTop + plot_h) + "\" x2=\"" + fmt(kLeft + plot_w) + "\" y2=\"" +
         fmt(kTop + plot_h) + "\"/>\n";
  out += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kTop) + "\" x2=\"" + fmt(kLeft) + "\" y2=\"" + fmt(kTop + plot_h) + "\"/>\n";
  out += "</g>\n";
  out += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = x_min + (x_max - x_min) * t / 4.0;
    const double yv = y_min + (y_max - y_min) * t / 4.0;
    out += "<text x=\"" + fmt(px(xv)) + "\" y=\"" + fmt(kTop + plot_h + 16) + "\" text-anchor=\"middle\">" + fmt(xv) + "</text>\n";
    out += "<text x=\"" + fmt(kLeft - 6) + "\" y=\"" + fmt(py(yv) + 4) + "\" text-anchor=\"end\">" + fmt(yv) + "</text>\n";
  }
  out += "<text x=\"" + fmt(kLeft + plot_w / 2) + "\" y=\"" + fmt(kHeight - 10) + "\" text-anchor=\"middle\">" +
         escape(chart.x_label) + "</text>\n";
  out += "<text x=\"16\" y=\"" + fmt(kTop + plot_h / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         fmt(kTop + plot_h / 2) + ")\">" + escape(chart.y_label) + "</text>\n";
  out += "</g>\n";

  for (std::size_t i = 0; i < chart.series.size(); ++i) {
    const auto& s = chart.series[i];
    const char* color = kPalette[i % (sizeof kPalette / sizeof kPalette[0])];
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t p = 0; p < s.points.size(); ++p) {
      if (p) out += ' ';
      out += fmt(px(s.points[p].first)) + "," + fmt(py(s.points[p].second));
    }
    out += "\"/>\n";
    const double ly = kTop + 14.0 * static_cast<double>(i);
    out += "<text x=\"" + fmt(kWidth - kRight + 12) + "\" y=\"" + fmt(ly + 4) + "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" +
           color + "\">" + escape(s.name) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace hebblsys::svg
