#include "esqoe/plot.hpp"

#include "esqoe/error.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace esqoe::plot {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 400;
constexpr double kLeft = 70;
constexpr double kRight = 150;
constexpr double kTop = 40;
constexpr double kBottom = 50;
constexpr const char *kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape(const std::string &s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

std::string line_chart_svg(const std::string &title, const std::string &x_label, const std::string &y_label,
                           std::span<const Series> series) {
    double x_min = 0, x_max = 0, y_min = 0, y_max = 0;
    bool first = true;
    for (const auto &s : series)
        for (const auto &[x, y] : s.points) {
            if (first) {
                x_min = x_max = x;
                y_max = y;
                first = false;
            }
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    if (first)
        throw Error("plot: no data points");
    // Degenerate ranges get a unit-wide window so single points still plot.
    if (x_max == x_min) {
        x_min -= 0.5;
        x_max += 0.5;
    }
    if (y_max == y_min)
        y_max = y_min + 1;

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * pw; };
    auto sy = [&](double y) { return kTop + ph - (y - y_min) / (y_max - y_min) * ph; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
        << escape(title) << "</text>\n";
    out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop + ph) << "\" x2=\"" << num(kLeft + pw)
        << "\" y2=\"" << num(kTop + ph) << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft) << "\" y2=\""
        << num(kTop + ph) << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double xv = x_min + (x_max - x_min) * t / 4;
        const double yv = y_min + (y_max - y_min) * t / 4;
        out << "<text x=\"" << num(sx(xv)) << "\" y=\"" << num(kTop + ph + 18)
            << "\" text-anchor=\"middle\" font-size=\"11\">" << label(xv) << "</text>\n";
        out << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(sy(yv) + 4)
            << "\" text-anchor=\"end\" font-size=\"11\">" << label(yv) << "</text>\n";
    }
    out << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 10)
        << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(x_label) << "</text>\n";
    out << "<text x=\"16\" y=\"" << num(kTop + ph / 2) << "\" text-anchor=\"middle\" font-size=\"12\" "
        << "transform=\"rotate(-90 16 " << num(kTop + ph / 2) << ")\">" << escape(y_label) << "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto &s = series[i];
        const char *color = kPalette[i % std::size(kPalette)];
        if (s.points.size() >= 2) {
            out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
            for (std::size_t k = 0; k < s.points.size(); ++k)
                out << (k ? " " : "") << num(sx(s.points[k].first)) << ',' << num(sy(s.points[k].second));
            out << "\"/>\n";
        }
        for (const auto &[x, y] : s.points)
            out << "<circle cx=\"" << num(sx(x)) << "\" cy=\"" << num(sy(y)) << "\" r=\"3\" fill=\"" << color
                << "\"/>\n";
        const double ly = kTop + 14 + 18 * static_cast<double>(i);
        out << "<rect x=\"" << num(kWidth - kRight + 14) << "\" y=\"" << num(ly - 9) << "\" width=\"12\" "
            << "height=\"12\" fill=\"" << color << "\"/>\n";
        out << "<text x=\"" << num(kWidth - kRight + 32) << "\" y=\"" << num(ly + 1) << "\" font-size=\"12\">"
            << escape(s.name) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

Charts render(std::span<const bench::AggregateRow> rows) {
    if (rows.empty())
        throw Error("plot: no aggregate rows to draw");
    std::vector<Series> qoe;
    std::vector<Series> time;
    for (const auto &r : rows) {
        auto it = std::find_if(qoe.begin(), qoe.end(), [&](const Series &s) { return s.name == r.strategy; });
        if (it == qoe.end()) {
            qoe.push_back({r.strategy, {}});
            time.push_back({r.strategy, {}});
            it = qoe.end() - 1;
        }
        auto idx = static_cast<std::size_t>(it - qoe.begin());
        qoe[idx].points.emplace_back(static_cast<double>(r.n_requests), r.mean_qoe);
        time[idx].points.emplace_back(static_cast<double>(r.n_requests), r.mean_exec_time_us);
    }
    for (auto *group : {&qoe, &time})
        for (auto &s : *group)
            std::sort(s.points.begin(), s.points.end());
    return Charts{line_chart_svg("Average QoE vs. number of requests", "number of requests", "mean QoE", qoe),
                  line_chart_svg("Average execution time vs. number of requests", "number of requests",
                                 "mean execution time (us)", time)};
}

void plot_file(const std::filesystem::path &csv_path, const std::filesystem::path &out_dir) {
    std::ifstream in(csv_path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + csv_path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    const auto text = buf.str();

    std::vector<bench::AggregateRow> rows;
    if (text.rfind("strategy,n_requests,trial,", 0) == 0)
        rows = bench::aggregate(bench::parse_records(text));
    else
        rows = bench::parse_aggregate(text);
    auto charts = render(rows);

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw Error("cannot create " + out_dir.string() + ": " + ec.message());
    for (auto [name, body] : {std::pair{"qoe_vs_requests.svg", &charts.qoe_svg},
                              std::pair{"exec_time_vs_requests.svg", &charts.exec_time_svg}}) {
        std::ofstream out(out_dir / name, std::ios::binary | std::ios::trunc);
        if (!(out << *body))
            throw Error("cannot write " + (out_dir / name).string());
    }
}

} // namespace esqoe::plot
