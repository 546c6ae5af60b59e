#include "ccfm/artifacts/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ccfm::artifacts {

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void Table::add_row(const std::vector<Cell>& cells) {
    if (cells.size() != header_.size()) throw std::invalid_argument("row width does not match header");
    std::vector<std::string> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
        if (const double* d = std::get_if<double>(&c))
            row.push_back(format_number(*d));
        else
            row.push_back(std::get<std::string>(c));
    }
    rows_.push_back(std::move(row));
}

bool Table::has_column(const std::string& name) const {
    return std::find(header_.begin(), header_.end(), name) != header_.end();
}

std::size_t Table::column_index(const std::string& name) const {
    const auto it = std::find(header_.begin(), header_.end(), name);
    if (it == header_.end()) throw std::out_of_range("no column named '" + name + "'");
    return static_cast<std::size_t>(it - header_.begin());
}

std::vector<double> Table::numeric(const std::string& name) const {
    const std::size_t c = column_index(name);
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const auto& row : rows_) {
        const std::string& s = row[c];
        double x = std::numeric_limits<double>::quiet_NaN();
        if (s == "inf")
            x = std::numeric_limits<double>::infinity();
        else if (s == "-inf")
            x = -std::numeric_limits<double>::infinity();
        else
            std::from_chars(s.data(), s.data() + s.size(), x);
        out.push_back(x);
    }
    return out;
}

std::vector<std::string> Table::text(const std::string& name) const {
    const std::size_t c = column_index(name);
    std::vector<std::string> out;
    out.reserve(rows_.size());
    for (const auto& row : rows_) out.push_back(row[c]);
    return out;
}

namespace {

void write_line(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        out << cells[i];
    }
    out << '\n';
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

} // namespace

void Table::write(std::ostream& out) const {
    write_line(out, header_);
    for (const auto& row : rows_) write_line(out, row);
}

std::string Table::str() const {
    std::ostringstream os;
    write(os);
    return os.str();
}

Table Table::read(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) return {};
    Table t(split(line));
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split(line);
        if (cells.size() != t.header_.size()) throw std::runtime_error("ragged CSV row: " + line);
        t.rows_.push_back(std::move(cells));
    }
    return t;
}

Table Table::parse(const std::string& text) {
    std::istringstream in(text);
    return read(in);
}

} // namespace ccfm::artifacts
