#pragma once

#include <string>
#include <vector>

namespace laban {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct ChartLabels {
  std::string title;
  std::string x_label;
  std::string y_label;
};

// Minimal standalone SVG charts with axes, ticks and a legend.
std::string line_chart(const std::vector<Series>& series, const ChartLabels& labels);
std::string bar_chart(const std::vector<std::string>& names, const std::vector<double>& values,
                      const ChartLabels& labels);

}  // namespace laban
