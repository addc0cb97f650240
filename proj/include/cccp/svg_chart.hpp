#pragma once

// Minimal SVG line charts: one or more panels side by side, optional log y
// axis, legend per panel.

#include <filesystem>
#include <string>
#include <vector>

namespace cccp {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct ChartPanel {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = true;
  std::vector<Series> series;
};

/// Points with non-finite coordinates, or y <= 0 on a log axis, are dropped.
/// A panel with nothing left to draw renders as an empty frame.
std::string render_svg(const std::vector<ChartPanel>& panels);
void write_svg_file(const std::filesystem::path& path, const std::vector<ChartPanel>& panels);

}  // namespace cccp
