#include "esqoe/csv.hpp"

#include "esqoe/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace esqoe::csv {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

} // namespace

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(trim(line.substr(start)));
            break;
        }
        out.emplace_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

Table parse(std::string_view text, std::string source) {
    Table table;
    table.source = std::move(source);
    std::size_t line_no = 0;
    bool have_header = false;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        auto line = trim(text.substr(pos, end - pos));
        ++line_no;
        pos = end + 1;
        if (line.empty())
            continue;
        auto fields = split(line);
        if (!have_header) {
            table.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != table.header.size())
            throw Error(table.source + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(table.header.size()) + " fields, got " +
                        std::to_string(fields.size()));
        table.rows.push_back(std::move(fields));
        table.line_numbers.push_back(line_no);
    }
    if (!have_header)
        throw Error(table.source + ": missing header row");
    return table;
}

Table read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path.filename().string());
}

void Table::require_header(const std::vector<std::string> &expected) const {
    if (header == expected)
        return;
    std::string want;
    for (const auto &h : expected)
        want += (want.empty() ? "" : ",") + h;
    std::string got;
    for (const auto &h : header)
        got += (got.empty() ? "" : ",") + h;
    throw Error(source + ": header must be '" + want + "', got '" + got + "'");
}

std::size_t Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name)
            return i;
    throw Error(source + ": missing column '" + std::string(name) + "'");
}

double to_double(std::string_view field, std::string_view what) {
    double value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size() || field.empty())
        throw Error("invalid number '" + std::string(field) + "' for " + std::string(what));
    return value;
}

std::int64_t to_int(std::string_view field, std::string_view what) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size() || field.empty())
        throw Error("invalid integer '" + std::string(field) + "' for " + std::string(what));
    return value;
}

std::uint64_t to_uint(std::string_view field, std::string_view what) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size() || field.empty())
        throw Error("invalid identifier '" + std::string(field) + "' for " + std::string(what));
    return value;
}

std::string format(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc())
        throw Error("cannot format number");
    return std::string(buf, ptr);
}

void write_file(const std::filesystem::path &path, const std::string &contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot write " + path.string());
    out << contents;
    if (!out)
        throw Error("write failed for " + path.string());
}

} // namespace esqoe::csv
