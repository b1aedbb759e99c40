#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bubbly/errors.hpp"

namespace bubbly {

// %.17g: shortest decimal form that round-trips every finite double exactly.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct CsvTable {
    std::vector<std::string> header;  // one entry per column, units in brackets
    std::vector<std::vector<double>> rows;
};

inline void write_csv(const std::string& path, const CsvTable& table) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw io_error("cannot open for writing: " + path);
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (c > 0)
            out << ',';
        out << table.header[c];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size())
            throw invalid_input_error("row width does not match the header: " + path);
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0)
                out << ',';
            out << format_double(row[c]);
        }
        out << '\n';
    }
    out.flush();
    if (!out)
        throw io_error("write failed: " + path);
}

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot open for reading: " + path);
    CsvTable table;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line_number == 1) {
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ','))
                table.header.push_back(cell);
            if (table.header.empty())
                throw parse_error("empty header", line_number, "");
            continue;
        }
        if (line.empty())
            continue;
        std::vector<double> row;
        row.reserve(table.header.size());
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            const char* begin = cell.c_str();
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin || *end != '\0')
                throw parse_error("not a number: '" + cell + "'", line_number,
                                  row.size() < table.header.size() ? table.header[row.size()]
                                                                   : "");
            row.push_back(v);
        }
        if (row.size() != table.header.size())
            throw parse_error("expected " + std::to_string(table.header.size()) +
                                  " columns, found " + std::to_string(row.size()),
                              line_number, "");
        table.rows.push_back(std::move(row));
    }
    if (table.header.empty())
        throw parse_error("file has no header line", 1, "");
    return table;
}

}
