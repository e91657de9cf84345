#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace rabi::cli {

struct Column {
    std::string name;
    std::string unit;  // empty: dimensionless
};

using Cell = std::variant<double, std::int64_t, std::string>;

/// Fixed-schema table; numbers are written with 17 significant digits.
class ResultTable {
public:
    ResultTable() = default;
    explicit ResultTable(std::vector<Column> columns);

    const std::vector<Column>& columns() const { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }

    /// Throws std::invalid_argument when the arity does not match the schema.
    void add_row(std::vector<Cell> row);

    /// `#`-prefixed lines written before the column header.
    std::vector<std::pair<std::string, std::string>> metadata;

    std::string body() const;     // column line plus rows
    std::string to_csv() const;   // metadata + body

private:
    std::vector<Column> columns_;
    std::vector<std::vector<Cell>> rows_;
};

std::string format_number(double v);
std::string format_cell(const Cell& cell);

/// Throws UsageError if a file cannot be created at `path`.
void check_writable(const std::string& path);

/// Writes via a temporary sibling file and rename.
void write_atomic(const std::string& path, const std::string& content);

struct CsvData {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Throws UsageError for a missing column.
    std::size_t column(const std::string& name) const;
};

/// Reads a CSV written by this tool; `#` lines are skipped.
CsvData read_csv(const std::string& path);

}  // namespace rabi::cli
