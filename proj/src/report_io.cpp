#include "entlab/report_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

namespace entlab {

std::string format_double(double x)
{
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    std::array<char, 32> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return {buf.data(), end};
}

std::string json_number(double x)
{
    return std::isfinite(x) ? format_double(x) : "null";
}

std::string json_string(std::string_view s)
{
    std::string out = "\"";
    for (const char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
        }
    }
    out += '"';
    return out;
}

std::string csv_row(const std::vector<std::string>& fields)
{
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i != 0) {
            out += ',';
        }
        out += fields[i];
    }
    out += '\n';
    return out;
}

namespace {

constexpr std::array<const char*, 6> kPalette = {"#1f77b4", "#d62728", "#2ca02c",
                                                 "#9467bd", "#ff7f0e", "#17becf"};

} // namespace

std::string svg_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                     const std::vector<SvgSeries>& series, bool log_x, bool log_y)
{
    constexpr double width = 640.0;
    constexpr double height = 420.0;
    constexpr double margin = 56.0;

    auto tx = [&](double v) { return log_x ? std::log10(v) : v; };
    auto ty = [&](double v) { return log_y ? std::log10(v) : v; };

    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            const double a = tx(s.x[i]);
            const double b = ty(s.y[i]);
            if (!std::isfinite(a) || !std::isfinite(b)) {
                continue;
            }
            xmin = std::min(xmin, a);
            xmax = std::max(xmax, a);
            ymin = std::min(ymin, b);
            ymax = std::max(ymax, b);
        }
    }
    if (!(xmin < xmax)) {
        xmin = std::isfinite(xmin) ? xmin - 1.0 : 0.0;
        xmax = xmin + 2.0;
    }
    if (!(ymin < ymax)) {
        ymin = std::isfinite(ymin) ? ymin - 1.0 : 0.0;
        ymax = ymin + 2.0;
    }
    auto px = [&](double a) { return margin + (a - xmin) / (xmax - xmin) * (width - 2 * margin); };
    auto py = [&](double b) { return height - margin - (b - ymin) / (ymax - ymin) * (height - 2 * margin); };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\""
       << height << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title
       << "</text>\n"
       << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
       << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n"
       << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
       << height - margin << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << width / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\" font-size=\"12\">"
       << x_label << (log_x ? " (log10)" : "") << "</text>\n"
       << "<text x=\"14\" y=\"" << height / 2 << "\" font-size=\"12\" transform=\"rotate(-90 14 " << height / 2
       << ")\" text-anchor=\"middle\">" << y_label << (log_y ? " (log10)" : "") << "</text>\n"
       << "<text x=\"" << margin << "\" y=\"" << height - margin + 16 << "\" font-size=\"10\">"
       << format_double(xmin) << "</text>\n"
       << "<text x=\"" << width - margin << "\" y=\"" << height - margin + 16
       << "\" font-size=\"10\" text-anchor=\"end\">" << format_double(xmax) << "</text>\n"
       << "<text x=\"" << margin - 4 << "\" y=\"" << height - margin << "\" font-size=\"10\" text-anchor=\"end\">"
       << format_double(ymin) << "</text>\n"
       << "<text x=\"" << margin - 4 << "\" y=\"" << margin + 4 << "\" font-size=\"10\" text-anchor=\"end\">"
       << format_double(ymax) << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* colour = kPalette[k % kPalette.size()];
        os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            const double a = tx(s.x[i]);
            const double b = ty(s.y[i]);
            if (!std::isfinite(a) || !std::isfinite(b)) {
                continue;
            }
            os << (first ? "" : " ") << format_double(px(a)) << ',' << format_double(py(b));
            first = false;
        }
        os << "\"/>\n";
        os << "<text x=\"" << width - margin - 4 << "\" y=\"" << margin + 14 * (k + 1)
           << "\" font-size=\"11\" text-anchor=\"end\" fill=\"" << colour << "\">" << s.label << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace entlab
