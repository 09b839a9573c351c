#pragma once

#include "hsap/linalg.hpp"

#include <string>
#include <vector>

namespace hsap {

/// Line chart of y against x with axis ticks. Output carries no timestamps
/// or environment state: identical input gives identical bytes.
std::string render_line_svg(const std::vector<double>& x, const std::vector<double>& y,
                            const std::string& x_label, const std::string& y_label);

/// Scatter of 2-D rows, or of 3-D rows through a fixed-angle orthographic
/// view (azimuth 30 degrees, elevation 20 degrees). Labels, when given (one
/// per row), select colors from a 10-color palette.
std::string render_scatter_svg(const Matrix& points, const std::vector<int>& labels);

}  // namespace hsap
