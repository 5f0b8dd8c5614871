#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace co2net {

/// Sectioned key-value configuration file.
///
/// Format: `[section]` headers followed by `key = value` lines.
/// Values are scalars or comma-separated lists; `#` and `;` start comments.
/// Keys are unique within a section.
class ConfigFile {
public:
    static ConfigFile load(const std::string& path);
    static ConfigFile parse(std::istream& in, const std::string& origin);

    bool has(const std::string& section, const std::string& key) const;

    double number(const std::string& section, const std::string& key) const;
    double number_or(const std::string& section, const std::string& key, double fallback) const;
    long long integer(const std::string& section, const std::string& key) const;
    long long integer_or(const std::string& section, const std::string& key, long long fallback) const;
    std::string text(const std::string& section, const std::string& key) const;
    std::string text_or(const std::string& section, const std::string& key, const std::string& fallback) const;
    std::vector<double> numbers(const std::string& section, const std::string& key, std::size_t expected_size) const;

    /// Applies a `section.key=value` command-line override. The section must
    /// already be known or is created; value syntax matches file values.
    void override_value(const std::string& dotted_key, const std::string& value);

    /// Throws ConfigError if the section holds a key outside `allowed`.
    void require_only(const std::string& section, const std::set<std::string>& allowed) const;

    bool has_section(const std::string& section) const;

    /// Echo of the fully resolved configuration, ini-formatted.
    std::string echo() const;

    const std::string& origin() const { return origin_; }

private:
    const std::string& raw(const std::string& section, const std::string& key) const;

    std::string origin_;
    // section -> key -> value, insertion-ordered per section for echo()
    std::map<std::string, std::map<std::string, std::string>> values_;
    std::vector<std::string> section_order_;
    std::map<std::string, std::vector<std::string>> key_order_;
};

} // namespace co2net
