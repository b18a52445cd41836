// Minimal line charts

#pragma once

#include <string>
#include <vector>

namespace bhsim::svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Self-contained SVG document with axes, tick labels and a legend.
std::string line_chart(const std::vector<Series>& series, const std::string& x_label,
                       const std::string& y_label, const std::string& title);

} // namespace bhsim::svg
