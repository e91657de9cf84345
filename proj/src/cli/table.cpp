#include "rabi/cli/table.hpp"

#include "rabi/cli/config.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rabi::cli {

namespace {

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    out += '"';
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

}  // namespace

ResultTable::ResultTable(std::vector<Column> columns) : columns_(std::move(columns)) {}

void ResultTable::add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) {
        throw std::invalid_argument("row arity " + std::to_string(row.size()) + " does not match schema arity " +
                                    std::to_string(columns_.size()));
    }
    rows_.push_back(std::move(row));
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_cell(const Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
    if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
    return quote(std::get<std::string>(cell));
}

std::string ResultTable::body() const {
    std::string out;
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        if (c) out += ',';
        out += columns_[c].name;
    }
    out += '\n';
    for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_cell(row[c]);
        }
        out += '\n';
    }
    return out;
}

std::string ResultTable::to_csv() const {
    std::string out;
    for (const auto& [key, value] : metadata) {
        out += "# " + key + ": " + value + "\n";
    }
    std::string units;
    for (const auto& col : columns_) {
        if (!units.empty()) units += ' ';
        units += col.name + "=" + (col.unit.empty() ? "1" : col.unit);
    }
    out += "# units: " + units + "\n";
    return out + body();
}

void check_writable(const std::string& path) {
    namespace fs = std::filesystem;
    const fs::path p(path);
    if (fs::is_directory(p)) {
        throw UsageError("output path '" + path + "' is a directory");
    }
    const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
    if (!fs::is_directory(dir)) {
        throw UsageError("output directory '" + dir.string() + "' does not exist");
    }
    const fs::path probe = dir / (p.filename().string() + ".probe.tmp");
    {
        std::ofstream out(probe);
        if (!out) {
            throw UsageError("output path '" + path + "' is not writable");
        }
    }
    std::error_code ec;
    fs::remove(probe, ec);
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write to '" + tmp + "' failed");
    }
    std::filesystem::rename(tmp, path);
}

std::size_t CsvData::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw UsageError("column '" + name + "' not found in input");
}

CsvData read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read input file '" + path + "'");
    CsvData data;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        auto fields = split_csv_line(line);
        if (!have_header) {
            data.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != data.header.size()) {
            throw UsageError("malformed row in '" + path + "': expected " + std::to_string(data.header.size()) +
                             " fields");
        }
        data.rows.push_back(std::move(fields));
    }
    if (!have_header) throw UsageError("input file '" + path + "' has no header line");
    return data;
}

}  // namespace rabi::cli
