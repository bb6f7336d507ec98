#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

// Self-contained SVG line/bar charts: axes, ticks, legend, polylines.
// No external tooling; enough to eyeball the reproduced exhibits.

namespace hetnet::cli {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

namespace svg_detail {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b"};

}  // namespace svg_detail

inline void write_line_chart(const std::string& path, const std::string& title,
                             const std::string& x_label, const std::string& y_label,
                             const std::vector<Series>& series, bool log_y = false) {
    using svg_detail::num;
    const double width = 640, height = 480;
    const double ml = 80, mr = 160, mt = 40, mb = 60;
    double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
    double y_min = x_min, y_max = -x_min;
    for (const auto& s : series) {
        for (double v : s.x) { x_min = std::min(x_min, v); x_max = std::max(x_max, v); }
        for (double v : s.y) {
            const double t = log_y ? std::log10(std::max(v, 1e-300)) : v;
            y_min = std::min(y_min, t);
            y_max = std::max(y_max, t);
        }
    }
    if (!(x_max > x_min)) x_max = x_min + 1.0;
    if (!(y_max > y_min)) y_max = y_min + 1.0;
    const double y_pad = 0.05 * (y_max - y_min);
    y_min -= y_pad;
    y_max += y_pad;

    auto map_x = [&](double v) { return ml + (v - x_min) / (x_max - x_min) * (width - ml - mr); };
    auto map_y = [&](double v) {
        const double t = log_y ? std::log10(std::max(v, 1e-300)) : v;
        return height - mb - (t - y_min) / (y_max - y_min) * (height - mt - mb);
    };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
        << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << (width - mr + ml) / 2 << "\" y=\"24\" font-size=\"16\" "
        << "text-anchor=\"middle\" font-family=\"sans-serif\">" << title << "</text>\n";

    // axes
    out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
        << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << height - mb << "\" stroke=\"black\"/>\n";
    const int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        const double fx = x_min + (x_max - x_min) * i / ticks;
        const double px = map_x(fx);
        out << "<line x1=\"" << num(px) << "\" y1=\"" << height - mb << "\" x2=\""
            << num(px) << "\" y2=\"" << height - mb + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << num(px) << "\" y=\"" << height - mb + 20
            << "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">"
            << num(fx) << "</text>\n";
        const double fy = y_min + (y_max - y_min) * i / ticks;
        const double py = height - mb - (fy - y_min) / (y_max - y_min) * (height - mt - mb);
        out << "<line x1=\"" << ml - 5 << "\" y1=\"" << num(py) << "\" x2=\"" << ml
            << "\" y2=\"" << num(py) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << ml - 8 << "\" y=\"" << num(py + 4)
            << "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">"
            << num(log_y ? std::pow(10.0, fy) : fy) << "</text>\n";
    }
    out << "<text x=\"" << (width - mr + ml) / 2 << "\" y=\"" << height - 16
        << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\">"
        << x_label << "</text>\n";
    out << "<text x=\"20\" y=\"" << (height - mb + mt) / 2
        << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "transform=\"rotate(-90 20 " << (height - mb + mt) / 2 << ")\">" << y_label
        << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = svg_detail::kPalette[k % 6];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            out << num(map_x(s.x[i])) << ',' << num(map_y(s.y[i])) << ' ';
        out << "\"/>\n";
        const double ly = mt + 18.0 * static_cast<double>(k);
        out << "<line x1=\"" << width - mr + 10 << "\" y1=\"" << num(ly) << "\" x2=\""
            << width - mr + 34 << "\" y2=\"" << num(ly) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << width - mr + 40 << "\" y=\"" << num(ly + 4)
            << "\" font-size=\"12\" font-family=\"sans-serif\">" << s.label << "</text>\n";
    }
    out << "</svg>\n";
}

inline void write_bar_chart(const std::string& path, const std::string& title,
                            const std::vector<std::string>& labels,
                            const std::vector<double>& values) {
    using svg_detail::num;
    const double width = 640, height = 480, ml = 80, mr = 40, mt = 40, mb = 110;
    double y_max = 0.0;
    for (double v : values) y_max = std::max(y_max, v);
    if (y_max <= 0.0) y_max = 1.0;
    y_max *= 1.1;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"24\" font-size=\"16\" "
        << "text-anchor=\"middle\" font-family=\"sans-serif\">" << title << "</text>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
        << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << height - mb << "\" stroke=\"black\"/>\n";
    const double plot_w = width - ml - mr;
    const double bar_w = plot_w / (2.0 * static_cast<double>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double cx = ml + plot_w * (0.5 + static_cast<double>(i)) /
                                   static_cast<double>(values.size());
        const double h = values[i] / y_max * (height - mt - mb);
        out << "<rect x=\"" << num(cx - bar_w / 2) << "\" y=\"" << num(height - mb - h)
            << "\" width=\"" << num(bar_w) << "\" height=\"" << num(h)
            << "\" fill=\"" << svg_detail::kPalette[i % 6] << "\"/>\n";
        out << "<text x=\"" << num(cx) << "\" y=\"" << height - mb + 14
            << "\" font-size=\"10\" text-anchor=\"end\" font-family=\"sans-serif\" "
            << "transform=\"rotate(-35 " << num(cx) << " " << height - mb + 14 << ")\">"
            << labels[i] << "</text>\n";
        out << "<text x=\"" << num(cx) << "\" y=\"" << num(height - mb - h - 5)
            << "\" font-size=\"10\" text-anchor=\"middle\" font-family=\"sans-serif\">"
            << num(values[i]) << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace hetnet::cli
