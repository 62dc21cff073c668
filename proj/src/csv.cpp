#include "voltgrid/csv.hpp"

#include "voltgrid/errors.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace voltgrid {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

std::vector<double> CsvTable::numeric_column(const std::string& name) const {
    const int col = column(name);
    if (col < 0) throw ParseError("missing CSV column '" + name + "'", 1);
    std::vector<double> out;
    out.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const std::string& cell = rows[r][static_cast<std::size_t>(col)];
        const char* s = cell.c_str();
        char* end = nullptr;
        double v = std::strtod(s, &end);
        if (end == s || *end != '\0')
            throw ParseError("non-numeric cell '" + cell + "' in column '" + name + "'",
                             static_cast<long>(r) + (meta.empty() ? 2 : 3));
        out.push_back(v);
    }
    return out;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open CSV file: " + path, 0);
    CsvTable table;
    std::string line;
    long line_no = 0;
    bool have_header = false;
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream stream(s);
        while (std::getline(stream, cell, ',')) cells.push_back(cell);
        if (!s.empty() && s.back() == ',') cells.push_back("");
        return cells;
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (!have_header) table.meta = line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1);
            continue;
        }
        if (!have_header) {
            table.header = split(line);
            if (table.header.empty()) throw ParseError("empty CSV header", line_no);
            have_header = true;
            continue;
        }
        auto cells = split(line);
        if (cells.size() != table.header.size())
            throw ParseError("row has " + std::to_string(cells.size()) + " cells, expected " +
                                 std::to_string(table.header.size()),
                             line_no);
        table.rows.push_back(std::move(cells));
    }
    if (!have_header) throw ParseError("CSV has no header row", line_no);
    return table;
}

std::string meta_value(const std::string& meta, const std::string& key) {
    std::istringstream in(meta);
    std::string token;
    while (in >> token) {
        auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        if (token.substr(0, eq) == key) return token.substr(eq + 1);
    }
    return "";
}

} // namespace voltgrid
