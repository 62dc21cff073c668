#pragma once

#include <map>
#include <set>
#include <string>

namespace voltgrid {

// Plain-text key/value configuration: one `key = value` pair per line,
// '#' starts a comment, blank lines ignored.
class KeyValueConfig {
public:
    KeyValueConfig() = default;

    static KeyValueConfig from_file(const std::string& path);
    static KeyValueConfig from_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    double get_double(const std::string& key, double fallback) const;
    long get_long(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;

    // Throws ConfigError naming the first key not in `known`; catches typos.
    void require_known(const std::set<std::string>& known) const;

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
    std::string origin_;
};

} // namespace voltgrid
