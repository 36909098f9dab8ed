#pragma once

#include <string>
#include <vector>

// Minimal SVG line plots for quick inspection. CSV outputs are the data of
// record; these are regenerable from them.
namespace optomech::svg {

struct Line {
  std::string label;
  std::vector<double> x, y;
};

struct Marker {
  std::string label;
  double x = 0.0;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<Line> lines;
  std::vector<Marker> markers;  // vertical lines
};

std::string render(const Plot& plot, int width = 800, int height = 500);

}  // namespace optomech::svg
