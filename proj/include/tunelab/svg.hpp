#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "tunelab/metrics.hpp"

namespace tunelab {

/// One named curve; x is the sample position 0..n-1.
struct SvgSeries {
    std::string label;
    Eigen::ArrayXd y;
};

struct SvgBox {
    std::string label;
    FiveNumber stats;
};

struct SvgBar {
    std::string label;
    double value = 0.0;
};

/// Charts only draw values handed to them; nothing is computed here beyond
/// axis placement, so every number in the picture exists in a report too.

std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const std::vector<SvgSeries>& series);

std::string render_box_chart(const std::string& title, const std::string& y_label,
                             const std::vector<SvgBox>& boxes);

std::string render_bar_chart(const std::string& title, const std::string& y_label,
                             const std::vector<SvgBar>& bars);

}  // namespace tunelab
