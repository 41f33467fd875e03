// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

// Self-contained static SVG scatter plots. Every data point is one
// <circle class="point">; group means are drawn as a polyline.

#ifndef BEVPSM_SVG_PLOT_HPP
#define BEVPSM_SVG_PLOT_HPP

#include <string>
#include <vector>

namespace bevpsm {

struct ScatterSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct ScatterPlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<ScatterSeries> series;
  bool mean_lines = true;  // connect the per-x means of each series
  bool zero_line = false;
};

std::string render_svg(const ScatterPlot& plot);

/// Counts <circle class="point"> elements (used by tests and report checks).
std::size_t count_svg_points(const std::string& svg);

/// 1, 2 or 5 times a power of ten covering [lo, hi] in about `target` steps.
std::vector<double> nice_ticks(double lo, double hi, int target = 6);

}  // namespace bevpsm

#endif  // BEVPSM_SVG_PLOT_HPP
