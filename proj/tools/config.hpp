#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qd::cli {

/// Configuration problem: bad file, unknown key, malformed value. Maps to
/// exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One known key: its section, name, default (empty = required when read),
/// and a one-line description for --explain.
struct SchemaEntry {
    const char* section;
    const char* key;
    const char* fallback;
    const char* description;
};

const std::vector<SchemaEntry>& config_schema();

/// Parsed INI-style experiment file. Every key must appear in the schema;
/// unknown sections, unknown keys, duplicates and malformed lines are
/// ConfigErrors carrying the file name and line number.
class ExperimentFile {
public:
    static ExperimentFile load(const std::string& path);

    /// Apply a "section.key=value" override (same validation as the file).
    void apply_override(const std::string& spec);

    bool has(const std::string& section, const std::string& key) const;

    std::string get_string(const std::string& section, const std::string& key) const;
    std::int64_t get_int(const std::string& section, const std::string& key) const;
    std::uint64_t get_uint(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key) const;
    bool get_bool(const std::string& section, const std::string& key) const;
    std::vector<int> get_int_list(const std::string& section, const std::string& key) const;
    std::vector<double> get_double_list(const std::string& section, const std::string& key) const;

    /// Required string: no schema default and absent from the file is an error.
    std::string require_string(const std::string& section, const std::string& key) const;

private:
    std::string path_;
    std::map<std::string, std::string> values_;  // "section.key" -> value

    std::string lookup(const std::string& section, const std::string& key, bool required) const;
};

/// Print every known key with its default and description.
void print_explain(std::ostream& out);

}  // namespace qd::cli
