#pragma once

#include <string>
#include <vector>

namespace lfcbf::scenario {

/// One polyline of a plot.
struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Static 2-D line plot written as a standalone SVG file: axes, ticks,
/// a legend and one polyline per series.
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<Series>& series);

}  // namespace lfcbf::scenario
