#pragma once

// Minimal CSV support for the sweep outputs and the fixture tables.
// Numbers are written in the shortest round-trip decimal form so that
// repeated runs are byte-identical and parsing loses nothing.

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace wyner {

inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::invalid_argument("parse_double: bad number '" + s + "'");
    return v;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::optional<double>>> rows;

    int column_index(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    }
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_csv: cannot open " + path);
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_csv: empty file " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    t.header = split_csv_line(line);
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::optional<double>> row;
        for (const auto& cell : split_csv_line(line)) {
            if (cell.empty()) row.emplace_back(std::nullopt);
            else row.emplace_back(parse_double(cell));
        }
        if (row.size() != t.header.size())
            throw std::runtime_error("read_csv: ragged row in " + path);
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline std::string to_csv_string(const CsvTable& t) {
    std::string out;
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        if (i) out += ',';
        out += t.header[i];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            if (row[i]) out += format_double(*row[i]);
        }
        out += '\n';
    }
    return out;
}

inline void write_csv(const std::string& path, const CsvTable& t) {
    std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    out << to_csv_string(t);
    if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

/// Two-column (param, value) reference table.
struct FixtureTable {
    std::vector<std::pair<double, double>> rows;
    std::string source;
};

inline FixtureTable load_fixture(const std::string& path) {
    const CsvTable t = read_csv(path);
    if (t.header.size() != 2 || t.header[0] != "param" || t.header[1] != "value")
        throw std::runtime_error("load_fixture: expected header 'param,value' in " + path);
    FixtureTable f;
    f.source = path;
    double prev = -std::numeric_limits<double>::infinity();
    for (const auto& row : t.rows) {
        if (!row[0] || !row[1])
            throw std::runtime_error("load_fixture: empty cell in " + path);
        if (!(*row[0] > prev))
            throw std::runtime_error("load_fixture: params not strictly increasing in " + path);
        if (!std::isfinite(*row[1]))
            throw std::runtime_error("load_fixture: non-finite value in " + path);
        prev = *row[0];
        f.rows.emplace_back(*row[0], *row[1]);
    }
    return f;
}

}  // namespace wyner
