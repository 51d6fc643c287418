#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sugarbait {

struct ChartSeries {
    std::string label;
    std::vector<double> xs;
    std::vector<double> ys;
    bool dashed = false;
};

struct LineChart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<ChartSeries> series;
    std::optional<double> reference_y;              // horizontal guide, e.g. R0 = 1
    std::vector<std::pair<double, double>> markers; // highlighted points, e.g. threshold crossings
    bool log_y = false;
};

/// Static SVG line chart. Output depends only on the chart contents.
std::string render_svg(const LineChart& chart);

} // namespace sugarbait
