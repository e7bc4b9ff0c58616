#pragma once

// Deterministic text formatting shared by every emitter.

#include <string>
#include <string_view>
#include <vector>

#include "entlab/numerics.hpp"

namespace entlab {

/// Shortest round-trip decimal form; "inf", "-inf", "nan" for non-finite values.
std::string format_double(double x);

/// JSON number literal; non-finite values become null.
std::string json_number(double x);

std::string json_string(std::string_view s);

/// Joins CSV fields with commas and terminates the row with LF.
std::string csv_row(const std::vector<std::string>& fields);

/// Minimal static SVG polyline plot. Each series is drawn in its own colour.
struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

std::string svg_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                     const std::vector<SvgSeries>& series, bool log_x = false, bool log_y = false);

} // namespace entlab
