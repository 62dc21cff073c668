#pragma once

#include <string>
#include <vector>

namespace voltgrid {

// Nine significant digits, the run-log float format.
std::string format_double(double v);

struct CsvTable {
    std::string meta; // leading '# ...' line without the marker, may be empty
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const; // -1 when absent
    std::vector<double> numeric_column(const std::string& name) const; // throws ParseError
};

// Strict reader: every row must match the header arity. Throws ParseError
// with the offending line number.
CsvTable read_csv(const std::string& path);

// Space-separated key=value pairs from a meta line ("k=v k2=v2 ...").
std::string meta_value(const std::string& meta, const std::string& key);

} // namespace voltgrid
