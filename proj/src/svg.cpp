// Copyright 2026 The SHS Bench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "shs/format.hpp"

namespace shs::detail {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 64.0;
constexpr double kRight = 160.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 56.0;
constexpr std::array<const char*, 6> kPalette{"#1f77b4", "#d62728", "#2ca02c",
                                              "#ff7f0e", "#9467bd", "#8c564b"};

std::string escape(const std::string& s) {
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

std::string num(double v) { return format_fixed(v, 1); }

}  // namespace

std::string render_svg(const Chart& chart) {
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  double y_max = 0.0;
  for (const Series& s : chart.series)
    for (double v : s.values)
      if (std::isfinite(v)) y_max = std::max(y_max, v);
  y_max = y_max <= 0.0 ? 1.0 : y_max * 1.1;
  const std::size_t n = std::max<std::size_t>(1, chart.categories.size());
  const double slot = plot_w / static_cast<double>(n);
  auto x_center = [&](std::size_t i) { return kLeft + slot * (static_cast<double>(i) + 0.5); };
  auto y_of = [&](double v) { return kTop + plot_h * (1.0 - std::max(0.0, v) / y_max); };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\""
    << num(kHeight) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
    << escape(chart.title) << "</text>\n";
  o << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop + plot_h) << "\" x2=\""
    << num(kLeft + plot_w) << "\" y2=\"" << num(kTop + plot_h) << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft)
    << "\" y2=\"" << num(kTop + plot_h) << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = y_max * t / 4.0;
    o << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(y_of(v) + 4)
      << "\" text-anchor=\"end\">" << format_fixed(v, 1) << "</text>\n";
  }
  for (std::size_t i = 0; i < chart.categories.size(); ++i) {
    o << "<text x=\"" << num(x_center(i)) << "\" y=\"" << num(kTop + plot_h + 18)
      << "\" text-anchor=\"middle\">" << escape(chart.categories[i]) << "</text>\n";
  }
  o << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 12)
    << "\" text-anchor=\"middle\">" << escape(chart.x_label) << "</text>\n";
  o << "<text x=\"16\" y=\"" << num(kTop + plot_h / 2) << "\" text-anchor=\"middle\" "
    << "transform=\"rotate(-90 16 " << num(kTop + plot_h / 2) << ")\">" << escape(chart.y_label)
    << "</text>\n";

  const std::size_t m = std::max<std::size_t>(1, chart.series.size());
  const double bar_w = slot * 0.8 / static_cast<double>(m);
  for (std::size_t si = 0; si < chart.series.size(); ++si) {
    const Series& s = chart.series[si];
    const char* color = kPalette[si % kPalette.size()];
    if (chart.kind == Chart::Kind::kBar) {
      for (std::size_t i = 0; i < s.values.size() && i < n; ++i) {
        const double x = x_center(i) - slot * 0.4 + bar_w * static_cast<double>(si);
        const double y = y_of(s.values[i]);
        o << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(bar_w)
          << "\" height=\"" << num(kTop + plot_h - y) << "\" fill=\"" << color << "\"/>\n";
      }
    } else {
      o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
      for (std::size_t i = 0; i < s.values.size() && i < n; ++i)
        o << (i ? " " : "") << num(x_center(i)) << ',' << num(y_of(s.values[i]));
      o << "\"/>\n";
      for (std::size_t i = 0; i < s.values.size() && i < n; ++i) {
        o << "<circle cx=\"" << num(x_center(i)) << "\" cy=\"" << num(y_of(s.values[i]))
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
      }
    }
    const double ly = kTop + 16.0 * static_cast<double>(si);
    o << "<rect x=\"" << num(kWidth - kRight + 12) << "\" y=\"" << num(ly) << "\" width=\"10\" "
      << "height=\"10\" fill=\"" << color << "\"/>\n";
    o << "<text x=\"" << num(kWidth - kRight + 28) << "\" y=\"" << num(ly + 9) << "\">"
      << escape(s.name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace shs::detail
