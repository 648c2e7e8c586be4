#pragma once

#include <streetperc/error.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace streetperc::cli {

struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

struct LineChart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
};

namespace detail {

inline std::string fmt(double v, const char* spec = "%.4g") {
    char buf[32];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

// Round step 1, 2 or 5 times a power of ten giving about n ticks.
inline double tick_step(double span, int n) {
    const double raw = span / n;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0})
        if (raw <= m * mag) return m * mag;
    return 10.0 * mag;
}

} // namespace detail

inline std::string render_svg(const LineChart& chart) {
    constexpr double W = 640, H = 420, left = 70, right = 150, top = 40, bottom = 55;
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : chart.series)
        for (auto [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 - x0 <= 0) x0 -= 0.5, x1 += 0.5;
    if (y1 - y0 <= 0) y0 -= 0.5, y1 += 0.5;
    const double pw = W - left - right, ph = H - top - bottom;
    auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto sy = [&](double y) { return top + ph - (y - y0) / (y1 - y0) * ph; };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" font-family=\"sans-serif\" "
         "font-size=\"12\">\n";
    s += "<rect width=\"640\" height=\"420\" fill=\"white\"/>\n";
    s += "<text x=\"" + detail::fmt(left + pw / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
         detail::escape(chart.title) + "</text>\n";
    s += "<rect x=\"" + detail::fmt(left) + "\" y=\"" + detail::fmt(top) + "\" width=\"" + detail::fmt(pw) +
         "\" height=\"" + detail::fmt(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

    const double xs = detail::tick_step(x1 - x0, 6), ys = detail::tick_step(y1 - y0, 6);
    for (double t = std::ceil(x0 / xs) * xs; t <= x1 + 1e-9 * xs; t += xs) {
        const double px = sx(t);
        s += "<line x1=\"" + detail::fmt(px) + "\" y1=\"" + detail::fmt(top + ph) + "\" x2=\"" + detail::fmt(px) +
             "\" y2=\"" + detail::fmt(top + ph + 5) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + detail::fmt(px) + "\" y=\"" + detail::fmt(top + ph + 18) + "\" text-anchor=\"middle\">" +
             detail::fmt(std::abs(t) < 1e-12 * xs ? 0.0 : t) + "</text>\n";
    }
    for (double t = std::ceil(y0 / ys) * ys; t <= y1 + 1e-9 * ys; t += ys) {
        const double py = sy(t);
        s += "<line x1=\"" + detail::fmt(left - 5) + "\" y1=\"" + detail::fmt(py) + "\" x2=\"" + detail::fmt(left) +
             "\" y2=\"" + detail::fmt(py) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + detail::fmt(left - 8) + "\" y=\"" + detail::fmt(py + 4) + "\" text-anchor=\"end\">" +
             detail::fmt(std::abs(t) < 1e-12 * ys ? 0.0 : t) + "</text>\n";
    }
    s += "<text x=\"" + detail::fmt(left + pw / 2) + "\" y=\"" + detail::fmt(H - 12) + "\" text-anchor=\"middle\">" +
         detail::escape(chart.x_label) + "</text>\n";
    s += "<text x=\"16\" y=\"" + detail::fmt(top + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         detail::fmt(top + ph / 2) + ")\">" + detail::escape(chart.y_label) + "</text>\n";

    for (std::size_t k = 0; k < chart.series.size(); ++k) {
        const auto& ser = chart.series[k];
        const std::string color = palette[k % (sizeof palette / sizeof *palette)];
        std::string pts;
        for (auto [x, y] : ser.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            if (!pts.empty()) pts += ' ';
            pts += detail::fmt(sx(x), "%.2f") + "," + detail::fmt(sy(y), "%.2f");
        }
        s += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        for (auto [x, y] : ser.points)
            if (std::isfinite(x) && std::isfinite(y))
                s += "<circle cx=\"" + detail::fmt(sx(x), "%.2f") + "\" cy=\"" + detail::fmt(sy(y), "%.2f") +
                     "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
        const double ly = top + 10 + 18.0 * static_cast<double>(k);
        s += "<line x1=\"" + detail::fmt(W - right + 12) + "\" y1=\"" + detail::fmt(ly) + "\" x2=\"" +
             detail::fmt(W - right + 32) + "\" y2=\"" + detail::fmt(ly) + "\" stroke=\"" + color +
             "\" stroke-width=\"2\"/>\n";
        s += "<text x=\"" + detail::fmt(W - right + 38) + "\" y=\"" + detail::fmt(ly + 4) + "\">" +
             detail::escape(ser.label) + "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

inline void write_svg(const std::string& path, const LineChart& chart) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << render_svg(chart);
}

} // namespace streetperc::cli
