#include "co2net/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "co2net/errors.hpp"

namespace co2net {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string strip_comment(const std::string& line) {
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '#' || line[i] == ';') return line.substr(0, i);
    }
    return line;
}

double parse_double(const std::string& s, const std::string& where) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || trim(std::string(end)).size() != 0) {
        throw ConfigError(where + ": not a number: '" + s + "'");
    }
    return v;
}

} // namespace

ConfigFile ConfigFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration file: " + path);
    return parse(in, path);
}

ConfigFile ConfigFile::parse(std::istream& in, const std::string& origin) {
    ConfigFile cfg;
    cfg.origin_ = origin;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": unterminated section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) {
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
            }
            if (!cfg.values_.count(section)) {
                cfg.values_[section];
                cfg.section_order_.push_back(section);
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        if (section.empty()) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": key outside any [section]");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        }
        if (cfg.values_[section].count(key)) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "' in [" + section + "]");
        }
        cfg.values_[section][key] = value;
        cfg.key_order_[section].push_back(key);
    }
    return cfg;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    auto it = values_.find(section);
    return it != values_.end() && it->second.count(key) > 0;
}

bool ConfigFile::has_section(const std::string& section) const {
    return values_.count(section) > 0;
}

const std::string& ConfigFile::raw(const std::string& section, const std::string& key) const {
    auto it = values_.find(section);
    if (it == values_.end()) throw ConfigError(origin_ + ": missing section [" + section + "]");
    auto kit = it->second.find(key);
    if (kit == it->second.end()) {
        throw ConfigError(origin_ + ": missing key '" + key + "' in [" + section + "]");
    }
    return kit->second;
}

double ConfigFile::number(const std::string& section, const std::string& key) const {
    return parse_double(raw(section, key), origin_ + ": [" + section + "] " + key);
}

double ConfigFile::number_or(const std::string& section, const std::string& key, double fallback) const {
    return has(section, key) ? number(section, key) : fallback;
}

long long ConfigFile::integer(const std::string& section, const std::string& key) const {
    const double v = number(section, key);
    const long long n = static_cast<long long>(v);
    if (static_cast<double>(n) != v) {
        throw ConfigError(origin_ + ": [" + section + "] " + key + ": expected an integer");
    }
    return n;
}

long long ConfigFile::integer_or(const std::string& section, const std::string& key, long long fallback) const {
    return has(section, key) ? integer(section, key) : fallback;
}

std::string ConfigFile::text(const std::string& section, const std::string& key) const {
    return raw(section, key);
}

std::string ConfigFile::text_or(const std::string& section, const std::string& key, const std::string& fallback) const {
    return has(section, key) ? text(section, key) : fallback;
}

std::vector<double> ConfigFile::numbers(const std::string& section, const std::string& key,
                                        std::size_t expected_size) const {
    const std::string& v = raw(section, key);
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_double(item, origin_ + ": [" + section + "] " + key));
    }
    if (out.size() != expected_size) {
        throw ConfigError(origin_ + ": [" + section + "] " + key + ": expected " +
                          std::to_string(expected_size) + " values, got " + std::to_string(out.size()));
    }
    return out;
}

void ConfigFile::override_value(const std::string& dotted_key, const std::string& value) {
    const auto dot = dotted_key.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == dotted_key.size()) {
        throw ConfigError("override must be section.key=value, got '" + dotted_key + "'");
    }
    const std::string section = dotted_key.substr(0, dot);
    const std::string key = dotted_key.substr(dot + 1);
    if (!values_.count(section)) {
        values_[section];
        section_order_.push_back(section);
    }
    if (!values_[section].count(key)) key_order_[section].push_back(key);
    values_[section][key] = value;
}

void ConfigFile::require_only(const std::string& section, const std::set<std::string>& allowed) const {
    auto it = values_.find(section);
    if (it == values_.end()) return;
    for (const auto& [key, _] : it->second) {
        if (!allowed.count(key)) {
            throw ConfigError(origin_ + ": unknown key '" + key + "' in [" + section + "]");
        }
    }
}

std::string ConfigFile::echo() const {
    std::ostringstream os;
    for (const auto& section : section_order_) {
        os << "[" << section << "]\n";
        auto oit = key_order_.find(section);
        if (oit != key_order_.end()) {
            for (const auto& key : oit->second) {
                os << key << " = " << values_.at(section).at(key) << "\n";
            }
        }
        os << "\n";
    }
    return os.str();
}

} // namespace co2net
