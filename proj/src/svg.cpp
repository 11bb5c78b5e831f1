// Copyright 2026 The Raceline Authors
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

#include "raceline/svg.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "raceline/geometry.hpp"
#include "raceline/text.hpp"

namespace raceline {
namespace {

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

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string render_svg(const NormalSet& ns, const std::vector<SvgSeries>& lines, double pixels_per_metre) {
  std::vector<SvgSeries> all;
  all.push_back({"left boundary", left_boundary(ns), "#444444", 0.6, ns.cyclic});
  all.push_back({"right boundary", right_boundary(ns), "#888888", 0.6, ns.cyclic});
  all.insert(all.end(), lines.begin(), lines.end());

  double xmin = std::numeric_limits<double>::max(), ymin = xmin;
  double xmax = std::numeric_limits<double>::lowest(), ymax = xmax;
  for (const auto& s : all) {
    for (const auto& p : s.points) {
      xmin = std::min(xmin, p.x());
      xmax = std::max(xmax, p.x());
      ymin = std::min(ymin, p.y());
      ymax = std::max(ymax, p.y());
    }
  }
  if (xmin > xmax) xmin = xmax = ymin = ymax = 0.0;
  const double pad = 10.0;
  const double k = pixels_per_metre;
  const double legend_h = 18.0 * static_cast<double>(all.size()) + 10.0;
  const double width = (xmax - xmin + 2 * pad) * k;
  const double height = (ymax - ymin + 2 * pad) * k + legend_h;
  auto px = [&](const Vec2& p) { return num((p.x() - xmin + pad) * k) + "," + num((ymax - p.y() + pad) * k); };

  std::ostringstream out;
  out << R"(<?xml version="1.0" encoding="UTF-8"?>)" << '\n';
  out << R"(<svg xmlns="http://www.w3.org/2000/svg" width=")" << num(width) << R"(" height=")" << num(height)
      << R"(" viewBox="0 0 )" << num(width) << ' ' << num(height) << R"(">)" << '\n';
  out << R"(<rect width="100%" height="100%" fill="white"/>)" << '\n';
  for (const auto& s : all) {
    out << R"(<polyline fill="none" stroke=")" << s.color
        << R"(" stroke-width=")" << num(std::max(0.5, s.stroke * k)) << R"(" points=")";
    for (std::size_t i = 0; i < s.points.size(); ++i) out << (i ? " " : "") << px(s.points[i]);
    if (s.closed && !s.points.empty()) out << ' ' << px(s.points.front());
    out << R"("><title>)" << escape(s.label) << "</title></polyline>\n";
  }
  out << R"(<g id="legend" font-family="sans-serif" font-size="12">)" << '\n';
  double y = (ymax - ymin + 2 * pad) * k + 14.0;
  for (const auto& s : all) {
    out << R"(<line x1="10" y1=")" << num(y - 4) << R"(" x2="40" y2=")" << num(y - 4) << R"(" stroke=")" << s.color
        << R"(" stroke-width="2"/>)";
    out << R"(<text x="46" y=")" << num(y) << R"(">)" << escape(s.label) << "</text>\n";
    y += 18.0;
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

std::string racing_line_svg(const NormalSet& ns, const RacingLine& prediction, const RacingLine* reference) {
  std::vector<SvgSeries> lines;
  if (reference != nullptr && !reference->points.empty()) {
    lines.push_back({"reference", reference->points, "#1f77b4", 0.8, ns.cyclic});
  }
  lines.push_back({"prediction", prediction.points, "#d62728", 0.8, ns.cyclic});
  return render_svg(ns, lines);
}

}  // namespace raceline
