#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "commands.hpp"
#include "experiment.hpp"
#include "svg.hpp"
#include "textio.hpp"

namespace adagrow::cli {

namespace {

// One polyline per method; when a grid other than the x axis has several
// values the method splits into one series per value so lines stay monotone
// in x.
std::string render_chart(const Experiment& ex, std::span<const OutRow> rows) {
    const bool kmax_mode = ex.k_grid.empty();
    const std::string& axis = ex.axis;
    std::vector<Series> series;
    std::map<std::string, std::size_t> index;
    for (const auto& row : rows) {
        std::string label = row.method;
        if (axis != "n" && ex.n_grid.size() > 1)
            label += " n=" + std::to_string(row.n);
        if (axis != "b" && ex.b_grid.size() > 1)
            label += " b=" + std::to_string(row.b);
        if (axis != "k" && ex.k_grid.size() > 1 && row.k)
            label += " k=" + std::to_string(*row.k);

        double x = axis == "n"   ? static_cast<double>(row.n)
                   : axis == "b" ? static_cast<double>(row.b)
                                 : static_cast<double>(*row.k);
        std::optional<double> y;
        if (kmax_mode) {
            if (row.k_max && *row.k_max > 0)
                y = static_cast<double>(*row.k_max);
        } else {
            y = row.alpha_prime;
        }
        if (!y) continue;

        auto [it, fresh] = index.try_emplace(label, series.size());
        if (fresh) series.push_back({label, {}});
        series[it->second].points.push_back({x, *y});
    }
    return render_loglog_chart(series, axis, kmax_mode ? "k_max" : "alpha'");
}

}  // namespace

int run_bound(OptionSource& src) {
    Experiment ex = Experiment::resolve(src);
    auto specs = ex.grid();
    auto rows = compute_rows(ex, specs);
    write_table(std::cout, rows);
    if (!ex.out.empty()) {
        std::ostringstream csv;
        write_csv(csv, rows);
        write_text_file(ex.out, csv.str());
    }
    if (!ex.svg.empty()) write_text_file(ex.svg, render_chart(ex, rows));
    return 0;
}

int run_sweep(OptionSource& src) {
    Experiment ex = Experiment::resolve(src);
    auto specs = ex.grid();
    auto rows = compute_rows(ex, specs);
    std::ostringstream csv;
    write_csv(csv, rows);
    if (ex.out.empty())
        std::cout << csv.str();
    else
        write_text_file(ex.out, csv.str());
    if (!ex.svg.empty()) write_text_file(ex.svg, render_chart(ex, rows));
    return 0;
}

}  // namespace adagrow::cli
