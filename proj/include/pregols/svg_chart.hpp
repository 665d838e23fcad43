#pragma once

// Minimal static SVG line chart with shaded error bands.

#include <string>
#include <vector>

namespace pregols::svg {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> band;  // half-width of the shaded band; may be empty
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 800;
  int height = 600;
  std::vector<Series> series;
};

std::string line_chart(const ChartSpec& spec);

}  // namespace pregols::svg
