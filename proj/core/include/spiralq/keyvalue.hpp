#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace spiralq {

/// One `key = value` line with the section it appeared in.
struct KeyValueEntry {
    std::string section;  // empty for keys before the first [section]
    std::string key;
    std::string value;
    std::size_t line = 0;
};

/// Minimal INI-style document: `[section]` headers, `key = value` lines,
/// `#` or `;` comments. Keys are unique per section; order is preserved.
class KeyValueDocument {
public:
    static KeyValueDocument parse(const std::string& text, const std::string& source = {});
    static KeyValueDocument load(const std::string& path);
    /// Rebuilds a document from entries (sections in first-seen order).
    static KeyValueDocument from_entries(std::vector<KeyValueEntry> entries, std::string source);

    const std::vector<KeyValueEntry>& entries() const { return entries_; }
    const std::string& source() const { return source_; }
    bool has_section(const std::string& section) const;
    std::vector<std::string> sections() const;
    const KeyValueEntry* find(const std::string& section, const std::string& key) const;
    std::vector<const KeyValueEntry*> in_section(const std::string& section) const;

private:
    std::vector<KeyValueEntry> entries_;
    std::vector<std::string> sections_;
    std::string source_;
};

std::string trim(std::string_view s);
std::vector<std::string> split_list(std::string_view s, char sep);

/// Strict conversions used at the configuration boundary; throw ParseError
/// carrying the entry's line number.
double parse_double(const KeyValueEntry& e, const std::string& source);
int parse_int(const KeyValueEntry& e, const std::string& source);
bool parse_bool(const KeyValueEntry& e, const std::string& source);

double parse_double_text(const std::string& text, std::size_t line, const std::string& source);

}  // namespace spiralq
