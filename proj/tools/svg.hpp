#pragma once

#include <string>
#include <vector>

namespace kramers_cli {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotLabels {
  std::string title;
  std::string x_axis;
  std::string y_axis;
};

// Line plot with axes and ticks as a standalone SVG document.
std::string render_svg(const std::vector<Series>& lines, const PlotLabels& labels);

}  // namespace kramers_cli
