#pragma once

#include <stdexcept>
#include <string>

namespace voltgrid {

// Bad configuration file contents or inconsistent option values.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input data (CSV, checkpoint); carries a 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, long line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

} // namespace voltgrid
