#ifndef ESQOE_PLOT_HPP_
#define ESQOE_PLOT_HPP_

#include "esqoe/bench.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace esqoe::plot {

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points; // sorted by x
};

// A line chart with one polyline (and markers) per series. Output bytes
// depend only on the input.
std::string line_chart_svg(const std::string &title, const std::string &x_label,
                           const std::string &y_label, std::span<const Series> series);

struct Charts {
    std::string qoe_svg;
    std::string exec_time_svg;
};

// Throws on empty input.
Charts render(std::span<const bench::AggregateRow> rows);

// Reads either a records or an aggregate CSV and writes
// qoe_vs_requests.svg and exec_time_vs_requests.svg into `out_dir`.
void plot_file(const std::filesystem::path &csv_path, const std::filesystem::path &out_dir);

} // namespace esqoe::plot

#endif
