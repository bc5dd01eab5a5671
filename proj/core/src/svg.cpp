#include "confham/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace confham {
namespace svg {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 480;
constexpr int kMargin = 56;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string header() {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kWidth) +
           "\" height=\"" + std::to_string(kHeight) + "\" viewBox=\"0 0 " +
           std::to_string(kWidth) + " " + std::to_string(kHeight) + "\">\n"
           "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string text(double x, double y, const std::string& s, int size = 12,
                 const std::string& anchor = "middle") {
    return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" +
           std::to_string(size) + "\" font-family=\"sans-serif\" text-anchor=\"" + anchor +
           "\">" + s + "</text>\n";
}

struct Range {
    double lo = 0.0, hi = 1.0;
    double map(double v, double pix_lo, double pix_hi) const {
        double t = hi == lo ? 0.5 : (v - lo) / (hi - lo);
        return pix_lo + t * (pix_hi - pix_lo);
    }
};

Range spread(double lo, double hi) {
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
    double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

std::string axes(const Range& rx, const Range& ry, const std::string& x_label,
                 const std::string& y_label, const std::string& title) {
    std::string out;
    out += "<rect x=\"" + num(kMargin) + "\" y=\"" + num(kMargin) + "\" width=\"" +
           num(kWidth - 2 * kMargin) + "\" height=\"" + num(kHeight - 2 * kMargin) +
           "\" fill=\"none\" stroke=\"black\"/>\n";
    out += text(kWidth / 2.0, kMargin - 16, title, 14);
    out += text(kWidth / 2.0, kHeight - 10, x_label);
    out += "<g transform=\"translate(14," + num(kHeight / 2.0) + ") rotate(-90)\">" +
           text(0, 0, y_label) + "</g>\n";
    for (int i = 0; i <= 4; ++i) {
        double fx = rx.lo + (rx.hi - rx.lo) * i / 4.0;
        double fy = ry.lo + (ry.hi - ry.lo) * i / 4.0;
        double px = kMargin + (kWidth - 2.0 * kMargin) * i / 4.0;
        double py = kHeight - kMargin - (kHeight - 2.0 * kMargin) * i / 4.0;
        out += text(px, kHeight - kMargin + 16, num(fx), 10);
        out += text(kMargin - 6, py + 4, num(fy), 10, "end");
    }
    return out;
}

}  // namespace

std::string polyline_plot(const std::vector<std::pair<double, double>>& points,
                          const std::string& x_label, const std::string& y_label,
                          const std::string& title) {
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
    double ylo = xlo, yhi = -xlo;
    for (const auto& [x, y] : points) {
        xlo = std::min(xlo, x);
        xhi = std::max(xhi, x);
        ylo = std::min(ylo, y);
        yhi = std::max(yhi, y);
    }
    if (points.empty()) xlo = ylo = 0.0, xhi = yhi = 1.0;
    Range rx = spread(xlo, xhi), ry = spread(ylo, yhi);

    std::string out = header();
    out += axes(rx, ry, x_label, y_label, title);
    out += "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1\" points=\"";
    for (const auto& [x, y] : points) {
        out += num(rx.map(x, kMargin, kWidth - kMargin)) + "," +
               num(ry.map(y, kHeight - kMargin, kMargin)) + " ";
    }
    out += "\"/>\n</svg>\n";
    return out;
}

std::string heatmap(const std::vector<double>& values, const std::vector<double>& x_ticks,
                    const std::vector<double>& y_ticks, const std::string& x_label,
                    const std::string& y_label, const std::string& title) {
    const std::size_t cols = x_ticks.size();
    const std::size_t rows = y_ticks.size();
    std::string out = header();
    out += text(kWidth / 2.0, kMargin - 16, title, 14);
    out += text(kWidth / 2.0, kHeight - 10, x_label);
    out += "<g transform=\"translate(14," + num(kHeight / 2.0) + ") rotate(-90)\">" +
           text(0, 0, y_label) + "</g>\n";

    double cw = (kWidth - 2.0 * kMargin) / std::max<std::size_t>(cols, 1);
    double ch = (kHeight - 2.0 * kMargin) / std::max<std::size_t>(rows, 1);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            double v = values[i * cols + j];
            double px = kMargin + j * cw;
            double py = kHeight - kMargin - (i + 1) * ch;
            std::string fill;
            if (std::isnan(v)) {
                fill = "#bbbbbb";
            } else {
                // 0 -> dark blue, 1 -> warm yellow
                int r = static_cast<int>(30 + 225 * v);
                int g = static_cast<int>(40 + 180 * v);
                int b = static_cast<int>(140 - 100 * v);
                char buf[16];
                std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
                fill = buf;
            }
            out += "<rect x=\"" + num(px) + "\" y=\"" + num(py) + "\" width=\"" + num(cw) +
                   "\" height=\"" + num(ch) + "\" fill=\"" + fill +
                   "\" stroke=\"white\" stroke-width=\"0.5\"/>\n";
        }
    }
    for (std::size_t j = 0; j < cols; ++j)
        out += text(kMargin + (j + 0.5) * cw, kHeight - kMargin + 16, num(x_ticks[j]), 10);
    for (std::size_t i = 0; i < rows; ++i)
        out += text(kMargin - 6, kHeight - kMargin - (i + 0.5) * ch + 4, num(y_ticks[i]), 10,
                    "end");
    out += "</svg>\n";
    return out;
}

std::string level_diagram(const std::vector<double>& levels, const std::vector<int>& cluster_ids,
                          const std::string& title) {
    static const char* palette[] = {"#1f6fb2", "#c03d2e", "#2c8a4b", "#8a5bb8", "#b8862c"};
    double lo = levels.empty() ? 0.0 : levels.front();
    double hi = levels.empty() ? 1.0 : levels.back();
    Range ry = spread(lo, hi);

    std::string out = header();
    out += axes({0.0, 1.0}, ry, "", "energy", title);
    for (std::size_t i = 0; i < levels.size(); ++i) {
        double py = ry.map(levels[i], kHeight - kMargin, kMargin);
        const char* color = palette[cluster_ids.empty() ? 0 : cluster_ids[i] % 5];
        out += "<line x1=\"" + num(kMargin + 40) + "\" x2=\"" + num(kWidth - kMargin - 40) +
               "\" y1=\"" + num(py) + "\" y2=\"" + num(py) + "\" stroke=\"" + color +
               "\" stroke-width=\"2\"/>\n";
        out += text(kWidth - kMargin - 34, py + 4, num(levels[i]), 10, "start");
    }
    out += "</svg>\n";
    return out;
}

}  // namespace svg
}  // namespace confham
