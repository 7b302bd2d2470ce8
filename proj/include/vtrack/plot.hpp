#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vtrack/record_csv.hpp"

namespace vtrack {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  // When > 0 a second x axis along the top shows x / top_axis_divisor.
  double top_axis_divisor = 0.0;
  std::string top_label;
  bool equal_aspect = false;
};

// Self-contained SVG line chart. Long series are reduced to a per-pixel-column
// min/max envelope so peaks survive.
std::string render_svg(const PlotSpec& spec);

// Writes the six run figures (trajectory, position errors, velocity errors,
// heading errors, tau1, tau2) next to each other in `dir` from a run CSV.
// Returns the written paths.
std::vector<std::filesystem::path> write_run_figures(const CsvTable& run,
                                                     const std::filesystem::path& dir);

}  // namespace vtrack
