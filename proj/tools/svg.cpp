// SPDX-License-Identifier: Apache-2.0
#include "svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>

#include "vanetsim/errors.hpp"

namespace vanetsim {

namespace {
constexpr double kWidth = 640.0;
constexpr double kHeight = 440.0;
constexpr double kMargin = 60.0;

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}
}  // namespace

void write_sweep_svg(const std::vector<AggregatePoint>& rows,
                     const std::string& x_label, const std::string& path) {
  if (rows.empty()) return;
  double x_lo = rows.front().param_value, x_hi = x_lo;
  double y_lo = 0.0, y_hi = 0.0;
  for (const auto& r : rows) {
    x_lo = std::min(x_lo, r.param_value);
    x_hi = std::max(x_hi, r.param_value);
    y_hi = std::max(y_hi, r.mean_sum_rate);
  }
  if (x_hi == x_lo) x_hi = x_lo + 1.0;
  if (y_hi == y_lo) y_hi = y_lo + 1.0;

  auto sx = [&](double v) {
    return kMargin + (v - x_lo) / (x_hi - x_lo) * (kWidth - 2 * kMargin);
  };
  auto sy = [&](double v) {
    return kHeight - kMargin -
           (v - y_lo) / (y_hi - y_lo) * (kHeight - 2 * kMargin);
  };

  std::map<std::string, std::vector<const AggregatePoint*>> series;
  for (const auto& r : rows) series[r.scheme].push_back(&r);

  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write SVG: " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // axes
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin
      << "\" x2=\"" << kWidth - kMargin << "\" y2=\"" << kHeight - kMargin
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\""
      << kMargin << "\" y2=\"" << kHeight - kMargin
      << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 14
      << "\" text-anchor=\"middle\" font-size=\"14\">" << x_label
      << "</text>\n";
  out << "<text x=\"16\" y=\"" << kHeight / 2
      << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 "
         "16 "
      << kHeight / 2 << ")\">mean sum-rate (bits/s/Hz/slot)</text>\n";

  // x tick labels at data points of the first series
  for (const auto* r : series.begin()->second) {
    out << "<text x=\"" << sx(r->param_value) << "\" y=\""
        << kHeight - kMargin + 18 << "\" text-anchor=\"middle\" "
        << "font-size=\"11\">" << fmt(r->param_value) << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double v = y_lo + (y_hi - y_lo) * i / 4.0;
    out << "<text x=\"" << kMargin - 8 << "\" y=\"" << sy(v) + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(v)
        << "</text>\n";
  }

  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  int idx = 0;
  double legend_y = kMargin;
  for (const auto& [name, pts] : series) {
    const char* color = colors[idx % 4];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\" points=\"";
    for (const auto* r : pts) {
      out << fmt(sx(r->param_value)) << "," << fmt(sy(r->mean_sum_rate))
          << " ";
    }
    out << "\"/>\n";
    for (const auto* r : pts) {
      out << "<circle cx=\"" << fmt(sx(r->param_value)) << "\" cy=\""
          << fmt(sy(r->mean_sum_rate)) << "\" r=\"3\" fill=\"" << color
          << "\"/>\n";
    }
    out << "<text x=\"" << kWidth - kMargin - 4 << "\" y=\"" << legend_y
        << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << color << "\">"
        << name << "</text>\n";
    legend_y += 16.0;
    ++idx;
  }
  out << "</svg>\n";
}

}  // namespace vanetsim
