#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace freebound::cli {

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
    bool closed = false;
};

// Axes plus polylines, scaled to fit.
inline void write_svg(const std::string& path, const std::vector<Series>& series, const std::string& title,
                      bool equal_aspect = false)
{
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            x0 = std::min(x0, x), x1 = std::max(x1, x);
            y0 = std::min(y0, y), y1 = std::max(y1, y);
        }
    if (!(x1 > x0)) x0 -= 0.5, x1 += 0.5;
    if (!(y1 > y0)) y0 -= 0.5, y1 += 0.5;
    const double w = 640, h = 480, pad = 48;
    double sx = (w - 2 * pad) / (x1 - x0), sy = (h - 2 * pad) / (y1 - y0);
    if (equal_aspect) sx = sy = std::min(sx, sy);
    auto px = [&](double x) { return pad + (x - x0) * sx; };
    auto py = [&](double y) { return h - pad - (y - y0) * sy; };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    char buf[128];
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << pad << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
    std::snprintf(buf, sizeof buf, "<path d=\"M%.2f %.2f L%.2f %.2f L%.2f %.2f\" fill=\"none\" stroke=\"black\"/>\n",
                  px(x0), py(y1), px(x0), py(y0), px(x1), py(y0));
    out << buf;
    for (auto [v, x, y, anchor] : {std::tuple{x0, px(x0), h - pad + 16, "start"}, {x1, px(x1), h - pad + 16, "end"}}) {
        std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\" text-anchor=\"%s\">%.4g</text>\n",
                      x, y, anchor, v);
        out << buf;
    }
    for (auto [v, y] : {std::pair{y0, py(y0)}, {y1, py(y1) + 10}}) {
        std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\" text-anchor=\"end\">%.4g</text>\n",
                      pad - 4, y, v);
        out << buf;
    }
    const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        out << "<" << (s.closed ? "polygon" : "polyline") << " fill=\"none\" stroke=\"" << colours[i % 4]
            << "\" stroke-width=\"1.5\" points=\"";
        for (auto [x, y] : s.points) {
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(x), py(y));
            out << buf;
        }
        out << "\"/>\n";
        std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"12\" fill=\"%s\">%s</text>\n",
                      w - pad - 120, 24.0 + 16 * i, colours[i % 4], s.label.c_str());
        out << buf;
    }
    out << "</svg>\n";
}

}  // namespace freebound::cli
