#include "maddclust/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace maddclust {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#17becf", "#7f7f7f", "#bcbd22", "#e377c2"};
constexpr int kPaletteSize = 10;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

}  // namespace

std::string render_line_plot(const PlotSpec& spec) {
    if (spec.series.empty()) throw std::runtime_error("svg: no series to plot");

    double x_min = 0, x_max = 0;
    bool first = true;
    std::set<double> ticks;
    for (const auto& s : spec.series) {
        if (s.x.size() != s.y.size()) throw std::runtime_error("svg: series '" + s.label + "' has mismatched x/y");
        for (double x : s.x) {
            ticks.insert(x);
            if (first) {
                x_min = x_max = x;
                first = false;
            } else {
                x_min = std::min(x_min, x);
                x_max = std::max(x_max, x);
            }
        }
    }
    if (first) throw std::runtime_error("svg: all series are empty");
    if (x_max == x_min) x_max = x_min + 1;
    double y_min = spec.y_min, y_max = spec.y_max;
    if (y_max <= y_min) y_max = y_min + 1;

    const double width = 640, height = 420;
    const double ml = 58, mr = 170, mt = 40, mb = 48;
    const double pw = width - ml - mr, ph = height - mt - mb;
    auto px = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * pw; };
    auto py = [&](double y) { return mt + (1.0 - (y - y_min) / (y_max - y_min)) * ph; };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n"
        << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"15\">" << escape_xml(spec.title) << "</text>\n";

    // axes
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\"" << mt + ph
        << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
        << "\" stroke=\"black\"/>\n";

    for (double t : ticks) {
        double x = px(t);
        svg << "<line x1=\"" << num(x) << "\" y1=\"" << mt + ph << "\" x2=\"" << num(x) << "\" y2=\""
            << mt + ph + 5 << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << num(x) << "\" y=\"" << mt + ph + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << num(t) << "</text>\n";
    }
    const int y_ticks = 5;
    for (int i = 0; i <= y_ticks; ++i) {
        double v = y_min + (y_max - y_min) * i / y_ticks;
        double y = py(v);
        svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << num(y) << "\" x2=\"" << ml << "\" y2=\"" << num(y)
            << "\" stroke=\"black\"/>\n"
            << "<line x1=\"" << ml << "\" y1=\"" << num(y) << "\" x2=\"" << ml + pw << "\" y2=\"" << num(y)
            << "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n"
            << "<text x=\"" << ml - 9 << "\" y=\"" << num(y + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(v)
            << "</text>\n";
    }
    svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 10
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << escape_xml(spec.x_label) << "</text>\n"
        << "<text x=\"16\" y=\"" << mt + ph / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16 "
        << mt + ph / 2 << ")\">" << escape_xml(spec.y_label) << "</text>\n";

    for (std::size_t si = 0; si < spec.series.size(); ++si) {
        const auto& s = spec.series[si];
        const char* color = kPalette[si % kPaletteSize];
        if (!s.x.empty()) {
            svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (i) svg << ' ';
                svg << num(px(s.x[i])) << ',' << num(py(std::clamp(s.y[i], y_min, y_max)));
            }
            svg << "\"/>\n";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                svg << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\""
                    << num(py(std::clamp(s.y[i], y_min, y_max))) << "\" r=\"2.5\" fill=\"" << color
                    << "\"/>\n";
            }
        }
        double ly = mt + 14 + 18.0 * static_cast<double>(si);
        svg << "<line x1=\"" << ml + pw + 14 << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << ml + pw + 38
            << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << ml + pw + 44 << "\" y=\"" << num(ly)
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape_xml(s.label) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void write_line_plot(const std::string& path, const PlotSpec& spec) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("svg: cannot write '" + path + "'");
    out << render_line_plot(spec);
    if (!out) throw std::runtime_error("svg: write failed for '" + path + "'");
}

}  // namespace maddclust
