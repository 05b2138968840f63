#include "qwdirac/csvio.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace qwd {

std::string format_double(double v) {
    if (v == 0.0) v = 0.0; // drop the sign of negative zero
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    if (res.ec != std::errc())
        throw std::runtime_error("format_double: to_chars failed");
    return std::string(buf, res.ptr);
}

void write_text_atomic(const std::string& path, const std::string& text) {
    const std::filesystem::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(target.parent_path(), ec);
        if (ec)
            throw std::runtime_error("write_text_atomic: cannot create " +
                                     target.parent_path().string() + ": " + ec.message());
    }
    const std::filesystem::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("write_text_atomic: cannot open " + tmp.string());
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        out.flush();
        if (!out)
            throw std::runtime_error("write_text_atomic: write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec)
        throw std::runtime_error("write_text_atomic: rename to " + path + " failed: " +
                                 ec.message());
}

namespace {

void append_row(std::string& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) out += ',';
        out += cells[i];
    }
    out += '\n';
}

} // namespace

std::string format_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows) {
    if (header.empty())
        throw std::invalid_argument("format_csv: header row is mandatory");
    std::string out;
    append_row(out, header);
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::invalid_argument("format_csv: row width does not match header");
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (!std::isfinite(row[i]))
                throw std::invalid_argument("format_csv: non-finite value in row");
            if (i > 0) line += ',';
            line += format_double(row[i]);
        }
        out += line;
        out += '\n';
    }
    return out;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    write_text_atomic(path, format_csv(header, rows));
}

void write_csv_cells(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& cells) {
    if (header.empty())
        throw std::invalid_argument("write_csv_cells: header row is mandatory");
    std::string out;
    append_row(out, header);
    for (const auto& row : cells) {
        if (row.size() != header.size())
            throw std::invalid_argument("write_csv_cells: row width does not match header");
        append_row(out, row);
    }
    write_text_atomic(path, out);
}

namespace {

double parse_cell(const std::string& cell, const std::string& path) {
    if (cell.empty())
        return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    const char* first = cell.data();
    const char* last = first + cell.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last)
        throw std::runtime_error("read_csv: bad numeric cell '" + cell + "' in " + path);
    return v;
}

std::vector<std::string> split_line(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return cells;
}

} // namespace

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("read_csv: cannot open " + path);
    CsvTable table;
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("read_csv: missing header row in " + path);
    table.header = split_line(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_line(line);
        if (cells.size() != table.header.size())
            throw std::runtime_error("read_csv: ragged row in " + path);
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) row.push_back(parse_cell(c, path));
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace qwd
