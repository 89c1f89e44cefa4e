#pragma once
// Minimal SVG emitters for the optional plot artifacts: a polyline chart for
// index/radius series and a grayscale heatmap for lattice fields. Coordinates
// are rendered with fixed precision so reruns stay byte-identical.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "superl/grid.hpp"

namespace superl {

struct PlotSeries {
    std::string name;
    std::vector<double> xs;
    std::vector<double> ys;
};

namespace svg_detail {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline const char* kPalette[6] = {"#1f77b4", "#d62728", "#2ca02c",
                                  "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace svg_detail

/// Line chart of one or more series; non-finite samples break the polyline.
inline std::string svg_line_plot(const std::string& title,
                                 const std::vector<PlotSeries>& series) {
    const double W = 640, H = 420, mL = 60, mR = 20, mT = 40, mB = 40;
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool seen = false;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.xs.size() && i < s.ys.size(); ++i) {
            if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
            if (!seen) {
                xmin = xmax = s.xs[i];
                ymin = ymax = s.ys[i];
                seen = true;
            }
            xmin = std::min(xmin, s.xs[i]);
            xmax = std::max(xmax, s.xs[i]);
            ymin = std::min(ymin, s.ys[i]);
            ymax = std::max(ymax, s.ys[i]);
        }
    if (xmax - xmin < 1e-300) xmax = xmin + 1;
    if (ymax - ymin < 1e-300) ymax = ymin + 1;
    auto X = [&](double x) { return mL + (x - xmin) / (xmax - xmin) * (W - mL - mR); };
    auto Y = [&](double y) { return H - mB - (y - ymin) / (ymax - ymin) * (H - mT - mB); };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           svg_detail::num(W) + "\" height=\"" + svg_detail::num(H) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + svg_detail::num(W / 2) + "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"monospace\" font-size=\"14\">" + title + "</text>\n";
    out += "<rect x=\"" + svg_detail::num(mL) + "\" y=\"" + svg_detail::num(mT) +
           "\" width=\"" + svg_detail::num(W - mL - mR) + "\" height=\"" +
           svg_detail::num(H - mT - mB) + "\" fill=\"none\" stroke=\"#444\"/>\n";
    auto label = [&](double x, double y, const std::string& t, const char* anchor) {
        out += "<text x=\"" + svg_detail::num(x) + "\" y=\"" + svg_detail::num(y) +
               "\" text-anchor=\"" + anchor +
               "\" font-family=\"monospace\" font-size=\"11\">" + t + "</text>\n";
    };
    char lab[32];
    std::snprintf(lab, sizeof lab, "%.4g", xmin);
    label(mL, H - mB + 16, lab, "middle");
    std::snprintf(lab, sizeof lab, "%.4g", xmax);
    label(W - mR, H - mB + 16, lab, "middle");
    std::snprintf(lab, sizeof lab, "%.4g", ymin);
    label(mL - 6, H - mB, lab, "end");
    std::snprintf(lab, sizeof lab, "%.4g", ymax);
    label(mL - 6, mT + 10, lab, "end");

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = svg_detail::kPalette[k % 6];
        std::string pts;
        auto flush = [&]() {
            if (!pts.empty())
                out += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
                       "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
            pts.clear();
        };
        for (std::size_t i = 0; i < s.xs.size() && i < s.ys.size(); ++i) {
            if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) {
                flush();
                continue;
            }
            pts += svg_detail::num(X(s.xs[i])) + "," + svg_detail::num(Y(s.ys[i])) + " ";
        }
        flush();
        label(W - mR - 6, mT + 16 + 14 * static_cast<double>(k), s.name, "end");
        out += "<rect x=\"" + svg_detail::num(W - mR - 90) + "\" y=\"" +
               svg_detail::num(mT + 8 + 14 * static_cast<double>(k)) +
               "\" width=\"10\" height=\"10\" fill=\"" + color + "\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

/// Grayscale cell map of a lattice field; exterior nodes are left blank.
/// Values are clipped to [lo, hi] (autoscaled over non-exterior nodes when
/// lo >= hi is passed).
inline std::string svg_heatmap(const Grid& g, const std::vector<double>& values,
                               const std::string& title, double lo = 0.0,
                               double hi = -1.0) {
    if (lo >= hi) {
        bool seen = false;
        for (std::size_t idx = 0; idx < g.size(); ++idx) {
            if (g.kind(idx) == NodeKind::Exterior || !std::isfinite(values[idx]))
                continue;
            if (!seen) {
                lo = hi = values[idx];
                seen = true;
            }
            lo = std::min(lo, values[idx]);
            hi = std::max(hi, values[idx]);
        }
        if (!seen) lo = 0, hi = 1;
        if (hi - lo < 1e-300) hi = lo + 1;
    }
    const double cell = std::max(1.0, std::floor(600.0 / std::max(g.nx(), g.ny())));
    const double W = cell * g.nx(), H = cell * g.ny() + 30;
    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           svg_detail::num(W) + "\" height=\"" + svg_detail::num(H) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + svg_detail::num(W / 2) + "\" y=\"18\" text-anchor=\"middle\" "
           "font-family=\"monospace\" font-size=\"13\">" + title + "</text>\n";
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            std::size_t idx = g.index(i, j);
            if (g.kind(idx) == NodeKind::Exterior) continue;
            double t = std::isfinite(values[idx])
                           ? std::clamp((values[idx] - lo) / (hi - lo), 0.0, 1.0)
                           : 0.0;
            int shade = static_cast<int>(std::lround(255.0 * (1.0 - t)));
            char color[8];
            std::snprintf(color, sizeof color, "#%02x%02x%02x", shade, shade, 255);
            out += "<rect x=\"" + svg_detail::num(i * cell) + "\" y=\"" +
                   svg_detail::num(30 + (g.ny() - 1 - j) * cell) + "\" width=\"" +
                   svg_detail::num(cell) + "\" height=\"" + svg_detail::num(cell) +
                   "\" fill=\"" + color + "\"/>\n";
        }
    }
    out += "</svg>\n";
    return out;
}

}  // namespace superl
