// Copyright 2026 The revmap Authors. All Rights Reserved.
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

#pragma once

// SVG loss-curve plot: per configuration, the mean over repeats as a
// polyline and, with two or more repeats, a mean +- sample-std band.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "revmap/error.hpp"
#include "revmap/results.hpp"

namespace revmap {

struct CurvePoint {
  std::size_t iteration = 0;
  double mean = 0.0;
  double std = 0.0;
  std::size_t count = 0;
};

struct Curve {
  std::string label;
  std::vector<CurvePoint> points;
  bool has_band() const {
    return std::any_of(points.begin(), points.end(),
                       [](const CurvePoint& p) { return p.count >= 2; });
  }
};

inline std::string curve_label(const LossRow& r) {
  std::string s = r.embedding;
  if (!std::isnan(r.alpha) && r.embedding != "amplitude") s += " M=" + format_real(r.scale_M);
  return s + " " + r.model_kind;
}

/// Groups rows by configuration (first-appearance order) and aggregates
/// per iteration across repeats.
inline std::vector<Curve> build_curves(const std::vector<LossRow>& rows) {
  std::vector<Curve> curves;
  std::vector<std::map<std::size_t, std::vector<double>>> values;
  for (const auto& r : rows) {
    const std::string label = curve_label(r);
    auto it = std::find_if(curves.begin(), curves.end(),
                           [&](const Curve& c) { return c.label == label; });
    std::size_t k = static_cast<std::size_t>(it - curves.begin());
    if (it == curves.end()) {
      curves.push_back({label, {}});
      values.emplace_back();
    }
    values[k][r.iteration].push_back(r.loss);
  }
  for (std::size_t k = 0; k < curves.size(); ++k) {
    for (const auto& [iter, v] : values[k]) {
      const MeanStd ms = mean_std(v);
      curves[k].points.push_back({iter, ms.mean, ms.std, v.size()});
    }
  }
  return curves;
}

namespace detail {

inline std::string xml_escape(std::string_view s) {
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

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace detail

struct PlotFrame {
  double width = 800, height = 500;
  double left = 70, right = 220, top = 30, bottom = 60;
};

inline std::string render_loss_svg(const std::vector<LossRow>& rows, const PlotFrame& f = {}) {
  using detail::num;
  if (rows.empty()) throw Error(ErrorCode::kEmptyInput, "no loss rows to plot");
  const auto curves = build_curves(rows);

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      xmin = std::min(xmin, double(p.iteration));
      xmax = std::max(xmax, double(p.iteration));
      ymin = std::min(ymin, p.mean - p.std);
      ymax = std::max(ymax, p.mean + p.std);
    }
  }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double pw = f.width - f.left - f.right, ph = f.height - f.top - f.bottom;
  auto sx = [&](double x) { return f.left + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return f.top + (ymax - y) / (ymax - ymin) * ph; };

  static const char* const palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                        "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                        "#bcbd22", "#17becf"};
  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(f.width) + "\" height=\"" +
       num(f.height) + "\" viewBox=\"0 0 " + num(f.width) + " " + num(f.height) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<g id=\"plot-area\" data-xmin=\"" + format_real(xmin) + "\" data-xmax=\"" +
       format_real(xmax) + "\" data-ymin=\"" + format_real(ymin) + "\" data-ymax=\"" +
       format_real(ymax) + "\" data-left=\"" + format_real(f.left) + "\" data-top=\"" +
       format_real(f.top) + "\" data-width=\"" + format_real(pw) + "\" data-height=\"" +
       format_real(ph) + "\">\n";

  // Axes and ticks.
  s += "<line x1=\"" + num(f.left) + "\" y1=\"" + num(f.top + ph) + "\" x2=\"" +
       num(f.left + pw) + "\" y2=\"" + num(f.top + ph) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + num(f.left) + "\" y1=\"" + num(f.top) + "\" x2=\"" + num(f.left) +
       "\" y2=\"" + num(f.top + ph) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 5.0, yv = ymin + (ymax - ymin) * i / 5.0;
    char lx[32], ly[32];
    std::snprintf(lx, sizeof lx, "%.0f", xv);
    std::snprintf(ly, sizeof ly, "%.3g", yv);
    s += "<text x=\"" + num(sx(xv)) + "\" y=\"" + num(f.top + ph + 18) +
         "\" font-size=\"11\" text-anchor=\"middle\">" + lx + "</text>\n";
    s += "<text x=\"" + num(f.left - 6) + "\" y=\"" + num(sy(yv) + 4) +
         "\" font-size=\"11\" text-anchor=\"end\">" + ly + "</text>\n";
  }
  s += "<text id=\"x-label\" x=\"" + num(f.left + pw / 2) + "\" y=\"" + num(f.height - 15) +
       "\" font-size=\"13\" text-anchor=\"middle\">iterations</text>\n";
  s += "<text id=\"y-label\" x=\"18\" y=\"" + num(f.top + ph / 2) +
       "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
       num(f.top + ph / 2) + ")\">loss</text>\n";

  for (std::size_t k = 0; k < curves.size(); ++k) {
    const auto& c = curves[k];
    const char* color = palette[k % std::size(palette)];
    const std::string label = detail::xml_escape(c.label);
    s += "<g class=\"series\" data-label=\"" + label + "\">\n";
    if (c.has_band()) {
      std::string pts;
      for (const auto& p : c.points) pts += num(sx(p.iteration)) + "," + num(sy(p.mean + p.std)) + " ";
      for (auto it = c.points.rbegin(); it != c.points.rend(); ++it) {
        pts += num(sx(it->iteration)) + "," + num(sy(it->mean - it->std)) + " ";
      }
      s += "<polygon class=\"band\" fill=\"" + std::string(color) +
           "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"" + pts + "\"/>\n";
    }
    std::string pts;
    for (const auto& p : c.points) pts += num(sx(p.iteration)) + "," + num(sy(p.mean)) + " ";
    s += "<polyline class=\"mean\" fill=\"none\" stroke=\"" + std::string(color) +
         "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    const double ly = f.top + 14.0 * static_cast<double>(k) + 8;
    s += "<line x1=\"" + num(f.left + pw + 12) + "\" y1=\"" + num(ly) + "\" x2=\"" +
         num(f.left + pw + 32) + "\" y2=\"" + num(ly) + "\" stroke=\"" + color +
         "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + num(f.left + pw + 36) + "\" y=\"" + num(ly + 4) +
         "\" font-size=\"11\">" + label + "</text>\n";
    s += "</g>\n";
  }
  s += "</g>\n</svg>\n";
  return s;
}

}  // namespace revmap
