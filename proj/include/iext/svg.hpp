// Copyright 2026 The iext Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Bare SVG plots: an empirical-vs-reference CDF overlay and step paths.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>


namespace iext::svg {

namespace detail {

constexpr double kWidth = 640, kHeight = 400, kMargin = 50;

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const { return kMargin + (x - x0) / (x1 - x0) * (kWidth - 2 * kMargin); }
  double py(double y) const { return kHeight - kMargin - (y - y0) / (y1 - y0) * (kHeight - 2 * kMargin); }
};

inline std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(5);
  ss << v;
  return ss.str();
}

inline void open(std::ostringstream& os, const std::string& title, const Frame& fr) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"25\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" << title
     << "</text>\n"
     << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kWidth - 2 * kMargin << "\" height=\""
     << kHeight - 2 * kMargin << "\" fill=\"none\" stroke=\"black\"/>\n";
  const auto label = [&](double x, double y, const std::string& s, const char* anchor) {
    os << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" text-anchor=\"" << anchor
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << s << "</text>\n";
  };
  label(kMargin, kHeight - kMargin + 15, fmt(fr.x0), "middle");
  label(kWidth - kMargin, kHeight - kMargin + 15, fmt(fr.x1), "middle");
  label(kMargin - 5, kHeight - kMargin, fmt(fr.y0), "end");
  label(kMargin - 5, kMargin + 4, fmt(fr.y1), "end");
}

inline void polyline(std::ostringstream& os, const std::vector<std::pair<double, double>>& pts, const Frame& fr,
                     const char* colour) {
  os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.2\" points=\"";
  for (const auto& [x, y] : pts) os << fmt(fr.px(x)) << ',' << fmt(fr.py(y)) << ' ';
  os << "\"/>\n";
}

}  // namespace detail

/// Empirical CDF of `samples` (black steps) against `cdf` (red), clipped at
/// the 99th percentile so heavy tails do not flatten the picture.
inline std::string cdf_overlay(std::vector<double> samples, const std::function<double(double)>& cdf, const std::string& title) {
  std::ostringstream os;
  std::sort(samples.begin(), samples.end());
  double hi = samples.empty() ? 1.0 : samples[static_cast<std::size_t>(0.99 * static_cast<double>(samples.size() - 1))];
  if (!(hi > 0.0)) hi = 1.0;
  const detail::Frame fr{0.0, hi, 0.0, 1.0};
  detail::open(os, title, fr);
  const std::size_t n = samples.size();
  const std::size_t stride = std::max<std::size_t>(1, n / 2000);
  std::vector<std::pair<double, double>> emp{{0.0, 0.0}};
  for (std::size_t i = 0; i < n && samples[i] <= hi; i += stride) {
    emp.emplace_back(samples[i], emp.back().second);
    emp.emplace_back(samples[i], static_cast<double>(i + 1) / static_cast<double>(n));
  }
  detail::polyline(os, emp, fr, "black");
  std::vector<std::pair<double, double>> ref;
  for (int k = 0; k <= 400; ++k) {
    const double x = hi * k / 400.0;
    ref.emplace_back(x, cdf(x));
  }
  detail::polyline(os, ref, fr, "red");
  os << "</svg>\n";
  return os.str();
}

/// Step functions t -> y_j(t), one per path.
inline std::string step_paths(const std::vector<double>& times, const std::vector<std::vector<double>>& paths,
                              const std::string& title) {
  std::ostringstream os;
  double y1 = 0.0;
  for (const auto& p : paths)
    for (double v : p)
      if (std::isfinite(v)) y1 = std::max(y1, v);
  if (!(y1 > 0.0)) y1 = 1.0;
  const double x0 = std::min(0.0, times.empty() ? 0.0 : times.front());
  const double x1 = times.empty() ? 1.0 : std::max(times.back(), x0 + 1e-9);
  const detail::Frame fr{x0, x1, 0.0, y1};
  detail::open(os, title, fr);
  static constexpr const char* kColours[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                             "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  for (std::size_t j = 0; j < paths.size(); ++j) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t k = 0; k < times.size() && k < paths[j].size(); ++k) {
      if (k > 0) pts.emplace_back(times[k], paths[j][k - 1]);
      pts.emplace_back(times[k], paths[j][k]);
    }
    detail::polyline(os, pts, fr, kColours[j % 10]);
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace iext::svg
