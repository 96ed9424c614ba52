#pragma once

#include <string>
#include <vector>

namespace hlsys {

struct SvgSeries {
    std::string label;
    std::vector<double> x, y;
};

// Static line chart; no display server involved.
void write_line_svg(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<SvgSeries>& series, bool log_y = false);

} // namespace hlsys
