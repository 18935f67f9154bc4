#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace adagrow::cli {

namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 600.0;   // plot edge; legend sits to the right
constexpr double kTop = 30.0;
constexpr double kBottom = 470.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string pow10_label(int e) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "1e%d", e);
    return buf;
}

}  // namespace

std::string render_loglog_chart(const std::vector<Series>& series,
                                const std::string& x_label,
                                const std::string& y_label) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = 0.0;
    double ymin = std::numeric_limits<double>::infinity(), ymax = 0.0;
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) ||
                !std::isfinite(y))
                continue;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (!(xmax > 0.0)) {  // nothing plottable: keep a valid empty chart
        xmin = 1.0;
        xmax = 10.0;
        ymin = 1.0;
        ymax = 10.0;
    }
    // Pad the ranges to whole decades so ticks land on labeled powers.
    int xe0 = static_cast<int>(std::floor(std::log10(xmin)));
    int xe1 = static_cast<int>(std::ceil(std::log10(xmax)));
    int ye0 = static_cast<int>(std::floor(std::log10(ymin)));
    int ye1 = static_cast<int>(std::ceil(std::log10(ymax)));
    if (xe0 == xe1) ++xe1;
    if (ye0 == ye1) ++ye1;

    auto px = [&](double x) {
        return kLeft + (std::log10(x) - xe0) / (xe1 - xe0) * (kRight - kLeft);
    };
    auto py = [&](double y) {
        return kBottom - (std::log10(y) - ye0) / (ye1 - ye0) * (kBottom - kTop);
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
        << kHeight << "\">\n";
    svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" fill=\"white\"/>\n";
    svg << "<g font-family=\"sans-serif\" font-size=\"12\">\n";

    // Axes and decade grid.
    svg << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\""
        << num(kRight - kLeft) << "\" height=\"" << num(kBottom - kTop)
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int e = xe0; e <= xe1; ++e) {
        double x = px(std::pow(10.0, e));
        svg << "<line x1=\"" << num(x) << "\" y1=\"" << num(kBottom)
            << "\" x2=\"" << num(x) << "\" y2=\"" << num(kTop)
            << "\" stroke=\"#dddddd\"/>\n";
        svg << "<text x=\"" << num(x) << "\" y=\"" << num(kBottom + 18)
            << "\" text-anchor=\"middle\">" << pow10_label(e) << "</text>\n";
    }
    for (int e = ye0; e <= ye1; ++e) {
        double y = py(std::pow(10.0, e));
        svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(y)
            << "\" x2=\"" << num(kRight) << "\" y2=\"" << num(y)
            << "\" stroke=\"#dddddd\"/>\n";
        svg << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(y + 4)
            << "\" text-anchor=\"end\">" << pow10_label(e) << "</text>\n";
    }
    svg << "<text x=\"" << num((kLeft + kRight) / 2) << "\" y=\""
        << num(kHeight - 8) << "\" text-anchor=\"middle\">" << x_label
        << "</text>\n";
    svg << "<text x=\"18\" y=\"" << num((kTop + kBottom) / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << num((kTop + kBottom) / 2) << ")\">" << y_label << "</text>\n";

    // One polyline and one legend entry per series.
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % (sizeof kPalette / sizeof *kPalette)];
        std::ostringstream pts;
        for (auto [x, y] : series[i].points) {
            if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) ||
                !std::isfinite(y))
                continue;
            pts << num(px(x)) << ',' << num(py(y)) << ' ';
        }
        svg << "<polyline points=\"" << pts.str()
            << "\" fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\"/>\n";
        double ly = kTop + 16.0 + 18.0 * static_cast<double>(i);
        svg << "<line x1=\"" << num(kRight + 12) << "\" y1=\"" << num(ly - 4)
            << "\" x2=\"" << num(kRight + 34) << "\" y2=\"" << num(ly - 4)
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << num(kRight + 40) << "\" y=\"" << num(ly)
            << "\">" << series[i].label << "</text>\n";
    }

    svg << "</g>\n</svg>\n";
    return svg.str();
}

}  // namespace adagrow::cli
