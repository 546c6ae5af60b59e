#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace ccfm::artifacts {

using Cell = std::variant<double, std::string>;

/// Column-named CSV table. Numbers are written with 17 significant digits,
/// so a write/read round trip is lossless.
class Table {
  public:
    Table() = default;
    explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

    const std::vector<std::string>& header() const noexcept { return header_; }
    std::size_t rows() const noexcept { return rows_.size(); }
    std::size_t columns() const noexcept { return header_.size(); }

    void add_row(const std::vector<Cell>& cells);
    const std::string& at(std::size_t row, std::size_t column) const { return rows_.at(row).at(column); }

    bool has_column(const std::string& name) const;
    std::size_t column_index(const std::string& name) const;
    /// Column parsed as numbers; non-numeric cells become NaN.
    std::vector<double> numeric(const std::string& name) const;
    std::vector<std::string> text(const std::string& name) const;

    void write(std::ostream& out) const;
    std::string str() const;
    static Table read(std::istream& in);
    static Table parse(const std::string& text);

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

std::string format_number(double x);

} // namespace ccfm::artifacts
