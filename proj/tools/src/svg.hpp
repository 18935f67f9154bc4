#pragma once

// Minimal log-log line chart: axes with decade ticks and one polyline per
// series.  The CSV is the source of truth; nonpositive or non-finite points
// cannot be placed on log axes and are skipped.

#include <string>
#include <utility>
#include <vector>

namespace adagrow::cli {

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

std::string render_loglog_chart(const std::vector<Series>& series,
                                const std::string& x_label,
                                const std::string& y_label);

}  // namespace adagrow::cli
