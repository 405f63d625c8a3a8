// Copyright 2026 The AAPDA Authors
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

#include "bench/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace bench {
namespace {

constexpr double kPanelWidth = 520.0;
constexpr double kPanelHeight = 380.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 36.0, kBottom = 96.0;
// Decades shown below the largest value.
constexpr int kMaxDecades = 24;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#17becf", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22"};

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
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

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void render_panel(std::ostringstream& out, const PlotPanel& panel, double x_offset) {
  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double ly_min = x_min, ly_max = -x_min;
  for (const PlotSeries& s : panel.series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i])) continue;
      x_min = std::min(x_min, s.x[i]);
      x_max = std::max(x_max, s.x[i]);
      if (s.y[i] > 0.0 && std::isfinite(s.y[i])) {
        ly_min = std::min(ly_min, std::log10(s.y[i]));
        ly_max = std::max(ly_max, std::log10(s.y[i]));
      }
    }
  }
  if (!std::isfinite(x_min)) {
    x_min = 0.0;
    x_max = 1.0;
  }
  if (x_max == x_min) x_max = x_min + 1.0;
  if (!std::isfinite(ly_min)) {
    ly_min = -1.0;
    ly_max = 1.0;
  }
  const double top = std::ceil(ly_max);
  const double bottom = std::max(std::floor(ly_min), top - kMaxDecades);
  const double span = std::max(top - bottom, 1.0);

  const double plot_w = kPanelWidth - kLeft - kRight;
  const double plot_h = kPanelHeight - kTop - kBottom;
  auto px = [&](double x) { return x_offset + kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double ly) {
    const double clipped = std::clamp(ly, bottom, bottom + span);
    return kTop + (1.0 - (clipped - bottom) / span) * plot_h;
  };

  out << "<g>\n";
  out << "<text x=\"" << fixed(x_offset + kLeft + plot_w / 2) << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-size=\"15\">" << escape(panel.title) << "</text>\n";
  out << "<rect x=\"" << fixed(x_offset + kLeft) << "\" y=\"" << fixed(kTop) << "\" width=\"" << fixed(plot_w)
      << "\" height=\"" << fixed(plot_h) << "\" fill=\"none\" stroke=\"#444\"/>\n";

  // Decade gridlines; thin out labels when the range is wide.
  const int step = span > 12 ? 3 : (span > 6 ? 2 : 1);
  for (int d = static_cast<int>(bottom); d <= static_cast<int>(bottom + span); ++d) {
    const double y = py(d);
    out << "<line x1=\"" << fixed(x_offset + kLeft) << "\" y1=\"" << fixed(y) << "\" x2=\""
        << fixed(x_offset + kLeft + plot_w) << "\" y2=\"" << fixed(y) << "\" stroke=\"#ddd\"/>\n";
    if ((d - static_cast<int>(bottom)) % step == 0) {
      out << "<text x=\"" << fixed(x_offset + kLeft - 6) << "\" y=\"" << fixed(y + 4)
          << "\" text-anchor=\"end\" font-size=\"11\">1e" << d << "</text>\n";
    }
  }
  for (int i = 0; i <= 4; ++i) {
    const double xv = x_min + (x_max - x_min) * i / 4.0;
    out << "<text x=\"" << fixed(px(xv)) << "\" y=\"" << fixed(kTop + plot_h + 16)
        << "\" text-anchor=\"middle\" font-size=\"11\">" << tick_label(xv) << "</text>\n";
  }
  out << "<text x=\"" << fixed(x_offset + kLeft + plot_w / 2) << "\" y=\"" << fixed(kTop + plot_h + 34)
      << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(panel.x_label) << "</text>\n";

  for (std::size_t si = 0; si < panel.series.size(); ++si) {
    const PlotSeries& s = panel.series[si];
    const char* color = kPalette[si % std::size(kPalette)];
    std::string points;
    auto flush = [&] {
      if (!points.empty()) {
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << points
            << "\"/>\n";
        points.clear();
      }
    };
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!(s.y[i] > 0.0) || !std::isfinite(s.y[i]) || !std::isfinite(s.x[i])) {
        flush();
        continue;
      }
      if (!points.empty()) points += ' ';
      points += fixed(px(s.x[i])) + "," + fixed(py(std::log10(s.y[i])));
    }
    flush();
    const double ly = kTop + plot_h + 52 + 14.0 * static_cast<double>(si % 3);
    const double lx = x_offset + kLeft + plot_w / 3.0 * static_cast<double>(si / 3);
    out << "<line x1=\"" << fixed(lx) << "\" y1=\"" << fixed(ly - 4) << "\" x2=\"" << fixed(lx + 18) << "\" y2=\""
        << fixed(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << fixed(lx + 22) << "\" y=\"" << fixed(ly) << "\" font-size=\"11\">" << escape(s.label)
        << "</text>\n";
  }
  out << "</g>\n";
}

}  // namespace

std::string render_svg(const std::vector<PlotPanel>& panels) {
  const double width = kPanelWidth * static_cast<double>(std::max<std::size_t>(panels.size(), 1));
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width) << "\" height=\""
      << fixed(kPanelHeight) << "\" viewBox=\"0 0 " << fixed(width) << " " << fixed(kPanelHeight)
      << "\" font-family=\"sans-serif\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < panels.size(); ++i) render_panel(out, panels[i], kPanelWidth * static_cast<double>(i));
  out << "</svg>\n";
  return out.str();
}

}  // namespace bench
