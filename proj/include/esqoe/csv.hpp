#ifndef ESQOE_CSV_HPP_
#define ESQOE_CSV_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace esqoe::csv {

// Minimal comma-separated tables: header row mandatory, no quoting.
struct Table {
    std::string source;                     // file name, used in diagnostics
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;  // 1-based source line of each row

    // Throws unless the header equals `expected` exactly.
    void require_header(const std::vector<std::string> &expected) const;
    std::size_t column(std::string_view name) const;
};

Table parse(std::string_view text, std::string source);
Table read_file(const std::filesystem::path &path);

std::vector<std::string> split(std::string_view line, char sep = ',');

double to_double(std::string_view field, std::string_view what);
std::int64_t to_int(std::string_view field, std::string_view what);
std::uint64_t to_uint(std::string_view field, std::string_view what);

// Shortest representation that parses back to the same double.
std::string format(double value);

void write_file(const std::filesystem::path &path, const std::string &contents);

} // namespace esqoe::csv

#endif
