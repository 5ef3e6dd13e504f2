#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "chernlab/errors.hpp"

namespace chernlab::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool valid_name(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    });
}

std::string unquote(std::string_view v, int line) {
    if (!v.empty() && v.front() == '"') {
        if (v.size() < 2 || v.back() != '"') throw ConfigError("unterminated quoted value", line);
        return std::string(v.substr(1, v.size() - 2));
    }
    return std::string(v);
}

void check_section(const std::string& name, int line) {
    const auto& known = config_sections();
    if (std::find(known.begin(), known.end(), name) == known.end())
        throw ConfigError("unknown section [" + name + "]", line);
}

}  // namespace

ConfigFile ConfigFile::parse(std::string_view text) {
    ConfigFile out;
    std::string current;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = std::min(text.find('\n', pos), text.size());
        const std::string_view line = trim(text.substr(pos, end - pos));
        ++line_no;
        pos = end + 1;
        if (line.empty() || line.front() == '#' || line.front() == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("malformed section header", line_no);
            current = std::string(trim(line.substr(1, line.size() - 2)));
            check_section(current, line_no);
            if (out.sections_.contains(current)) throw ConfigError("duplicate section [" + current + "]", line_no);
            out.sections_[current];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError("expected key = value", line_no);
        if (current.empty()) throw ConfigError("key outside of any section", line_no);
        const std::string key(trim(line.substr(0, eq)));
        if (!valid_name(key)) throw ConfigError("invalid key '" + key + "'", line_no);
        auto& sec = out.sections_[current];
        if (sec.contains(key)) throw ConfigError("duplicate key '" + key + "'", line_no);
        sec[key] = {unquote(trim(line.substr(eq + 1)), line_no), line_no};
    }
    return out;
}

ConfigFile ConfigFile::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'", 0);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

void ConfigFile::apply_override(std::string_view assignment) {
    const auto eq = assignment.find('=');
    const auto dot = assignment.find('.');
    if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq)
        throw ConfigError("--set expects section.key=value, got '" + std::string(assignment) + "'", 0);
    const std::string section(trim(assignment.substr(0, dot)));
    const std::string key(trim(assignment.substr(dot + 1, eq - dot - 1)));
    check_section(section, 0);
    if (!valid_name(key)) throw ConfigError("invalid key '" + key + "' in --set", 0);
    sections_[section][key] = {unquote(trim(assignment.substr(eq + 1)), 0), 0};
}

const ConfigValue* ConfigFile::find(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
}

const std::map<std::string, ConfigValue>& ConfigFile::section(const std::string& section) const {
    static const std::map<std::string, ConfigValue> empty;
    const auto s = sections_.find(section);
    return s == sections_.end() ? empty : s->second;
}

void ConfigFile::set(const std::string& section, const std::string& key, std::string value) {
    sections_[section][key] = {std::move(value), 0};
}

void ConfigFile::reject_unknown(const std::string& section, const std::vector<std::string>& allowed) const {
    for (const auto& [key, value] : this->section(section)) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError("unknown key '" + key + "' in [" + section + "]", value.line);
    }
}

}  // namespace chernlab::cli
