#pragma once

#include <string>
#include <vector>

namespace qhmcgp {

struct ChartSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
};

struct ChartOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 640;
  int height = 400;
};

/// Standalone SVG line chart with axes, ticks, labels and a legend.
/// Output bytes depend only on the inputs.
std::string render_line_chart(const std::vector<ChartSeries>& series, const ChartOptions& options);

/// Escape text for XML character data and attribute values.
std::string xml_escape(const std::string& text);

}  // namespace qhmcgp
