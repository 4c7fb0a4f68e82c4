// Copyright 2026 The lindblad-mitigation Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LMIT_SVG_HPP
#define LMIT_SVG_HPP

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "lmit/csv.hpp"

namespace lmit {

struct PlotSeries {
  std::string name;
  std::vector<double> y;
};

/// Minimal line plot. Non-finite points break the line.
inline void write_line_plot(const std::filesystem::path& path, const std::string& title,
                            const std::string& x_label, const std::vector<double>& x,
                            const std::vector<PlotSeries>& series) {
  constexpr double kW = 720, kH = 440, kL = 70, kR = 160, kT = 40, kB = 50;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (double v : x) {
    xmin = std::min(xmin, v);
    xmax = std::max(xmax, v);
  }
  for (const auto& s : series)
    for (double v : s.y)
      if (std::isfinite(v)) {
        ymin = std::min(ymin, v);
        ymax = std::max(ymax, v);
      }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!std::isfinite(ymin)) ymin = 0.0, ymax = 1.0;
  if (!(ymax > ymin)) ymax = ymin + 1.0;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  auto px = [&](double v) { return kL + (v - xmin) / (xmax - xmin) * (kW - kL - kR); };
  auto py = [&](double v) { return kT + (ymax - v) / (ymax - ymin) * (kH - kT - kB); };

  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title
      << "</text>\n"
      << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << kW - kL - kR << "\" height=\""
      << kH - kT - kB << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 4.0;
    const double yv = ymin + (ymax - ymin) * i / 4.0;
    out << "<text x=\"" << px(xv) << "\" y=\"" << kH - kB + 18 << "\" text-anchor=\"middle\">"
        << format_float(std::round(xv * 1e4) / 1e4) << "</text>\n"
        << "<text x=\"" << kL - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">"
        << format_float(std::round(yv * 1e4) / 1e4) << "</text>\n";
  }
  out << "<text x=\"" << (kL + kW - kR) / 2 << "\" y=\"" << kH - 10
      << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd"};
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = palette[s % 5];
    std::string d;
    bool pen = false;
    for (std::size_t i = 0; i < std::min(x.size(), series[s].y.size()); ++i) {
      const double v = series[s].y[i];
      if (!std::isfinite(v)) {
        pen = false;
        continue;
      }
      d += (pen ? " L" : " M") + format_float(px(x[i])) + "," + format_float(py(v));
      pen = true;
    }
    out << "<path d=\"" << d << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"/>\n"
        << "<text x=\"" << kW - kR + 12 << "\" y=\"" << kT + 16 + 18 * s << "\" fill=\"" << color
        << "\">" << series[s].name << "</text>\n";
  }
  out << "</svg>\n";
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace lmit

#endif  // LMIT_SVG_HPP
