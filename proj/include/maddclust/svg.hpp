#pragma once

#include <string>
#include <vector>

namespace maddclust {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label = "log2 d";
    std::string y_label = "mean Rand index";
    double y_min = 0.0;
    double y_max = 1.0;
    std::vector<PlotSeries> series;
};

// Renders a static SVG 1.1 line chart: one polyline per series, axis ticks at
// every distinct x value, and a legend keyed by line color.
std::string render_line_plot(const PlotSpec& spec);

void write_line_plot(const std::string& path, const PlotSpec& spec);

}  // namespace maddclust
