#include "hlsys/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace hlsys {

namespace {

constexpr int kWidth = 720, kHeight = 480;
constexpr int kMarginL = 70, kMarginR = 20, kMarginT = 40, kMarginB = 50;
const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

} // namespace

void write_line_svg(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<SvgSeries>& series, bool log_y) {
    double x_lo = HUGE_VAL, x_hi = -HUGE_VAL, y_lo = HUGE_VAL, y_hi = -HUGE_VAL;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            double yv = s.y[i];
            if (log_y) {
                if (!(yv > 0)) continue;
                yv = std::log10(yv);
            }
            x_lo = std::min(x_lo, s.x[i]);
            x_hi = std::max(x_hi, s.x[i]);
            y_lo = std::min(y_lo, yv);
            y_hi = std::max(y_hi, yv);
        }
    if (!(x_hi >= x_lo) || !(y_hi >= y_lo)) {
        x_lo = y_lo = 0;
        x_hi = y_hi = 1;
    }
    if (x_hi == x_lo) x_hi = x_lo + 1;
    if (y_hi == y_lo) {
        y_hi += 0.5;
        y_lo -= 0.5;
    }
    const double pw = kWidth - kMarginL - kMarginR;
    const double ph = kHeight - kMarginT - kMarginB;
    auto px = [&](double x) { return kMarginL + (x - x_lo) / (x_hi - x_lo) * pw; };
    auto py = [&](double y) {
        if (log_y) y = std::log10(std::max(y, 1e-300));
        return kMarginT + (1.0 - (y - y_lo) / (y_hi - y_lo)) * ph;
    };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_line_svg: cannot open " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight
        << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

    // frame and ticks
    out << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\"" << pw
        << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#444\"/>\n";
    const int nticks = 5;
    for (int t = 0; t <= nticks; ++t) {
        const double fx = x_lo + (x_hi - x_lo) * t / nticks;
        const double fy = y_lo + (y_hi - y_lo) * t / nticks;
        const double gx = px(fx);
        const double gy = kMarginT + (1.0 - double(t) / nticks) * ph;
        out << "<line x1=\"" << gx << "\" y1=\"" << kMarginT + ph << "\" x2=\"" << gx
            << "\" y2=\"" << kMarginT + ph + 5 << "\" stroke=\"#444\"/>\n";
        out << "<text x=\"" << gx << "\" y=\"" << kMarginT + ph + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << fmt(fx) << "</text>\n";
        out << "<line x1=\"" << kMarginL - 5 << "\" y1=\"" << gy << "\" x2=\"" << kMarginL
            << "\" y2=\"" << gy << "\" stroke=\"#444\"/>\n";
        out << "<text x=\"" << kMarginL - 8 << "\" y=\"" << gy + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << (log_y ? "1e" + fmt(fy) : fmt(fy)) << "</text>\n";
    }
    out << "<text x=\"" << kMarginL + pw / 2 << "\" y=\"" << kHeight - 10
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << x_label << "</text>\n";
    out << "<text x=\"16\" y=\"" << kMarginT + ph / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 16 " << kMarginT + ph / 2 << ")\">" << y_label
        << "</text>\n";

    int color = 0;
    for (const auto& s : series) {
        out << "<polyline fill=\"none\" stroke=\"" << kColors[color % 6]
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (log_y && !(s.y[i] > 0)) continue;
            out << px(s.x[i]) << "," << py(s.y[i]) << " ";
        }
        out << "\"/>\n";
        if (!s.label.empty())
            out << "<text x=\"" << kMarginL + pw - 8 << "\" y=\"" << kMarginT + 16 + 16 * color
                << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
                << kColors[color % 6] << "\">" << s.label << "</text>\n";
        ++color;
    }
    out << "</svg>\n";
}

} // namespace hlsys
