#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace binofeat {

using Rgb = std::array<std::uint8_t, 3>;

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;  // same length as x
  Rgb color{30, 90, 200};
};

// Line chart rendered to an RGB PNG: auto-ranged axes with numeric ticks, a
// 5x7 bitmap font for labels, and a legend in the top-right corner. Meant
// for loss curves, trajectory top-views, and per-frame error series; no
// interactivity, files only.
void render_plot(const std::string& path, const std::string& title,
                 const std::string& x_label, const std::string& y_label,
                 const std::vector<PlotSeries>& series, int width = 900,
                 int height = 600);

}  // namespace binofeat
