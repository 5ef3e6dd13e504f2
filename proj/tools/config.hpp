#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chernlab::cli {

/// One key = value entry with the line it came from (0 for --set overrides).
struct ConfigValue {
    std::string text;
    int line = 0;
};

/// Sections of `key = value` lines. Blank lines and lines starting with '#'
/// or ';' are ignored; values may be wrapped in double quotes.
class ConfigFile {
public:
    static ConfigFile parse(std::string_view text);
    static ConfigFile load(const std::string& path);

    /// "section.key=value"; replaces any existing entry.
    void apply_override(std::string_view assignment);

    bool has_section(const std::string& section) const { return sections_.contains(section); }
    const ConfigValue* find(const std::string& section, const std::string& key) const;
    const std::map<std::string, ConfigValue>& section(const std::string& section) const;
    void set(const std::string& section, const std::string& key, std::string value);

    /// Throws ConfigError naming the first key of `section` not in `allowed`.
    void reject_unknown(const std::string& section, const std::vector<std::string>& allowed) const;

private:
    std::map<std::string, std::map<std::string, ConfigValue>> sections_;
};

inline const std::vector<std::string>& config_sections() {
    static const std::vector<std::string> names{"surface", "quadrature", "compare", "output"};
    return names;
}

}  // namespace chernlab::cli
