#include "spiralq/keyvalue.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "spiralq/error.hpp"

namespace spiralq {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = s.find(sep, pos);
        out.push_back(trim(s.substr(pos, next == std::string_view::npos ? next : next - pos)));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

KeyValueDocument KeyValueDocument::parse(const std::string& text, const std::string& source) {
    KeyValueDocument doc;
    doc.source_ = source;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find_first_of("#;");
        const std::string line = trim(std::string_view(raw).substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3)
                throw ParseError("malformed section header '" + line + "'", line_no, source);
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (std::find(doc.sections_.begin(), doc.sections_.end(), section) != doc.sections_.end())
                throw ParseError("duplicate section [" + section + "]", line_no, source);
            doc.sections_.push_back(section);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'key = value', got '" + line + "'", line_no, source);
        KeyValueEntry e{section, trim(std::string_view(line).substr(0, eq)),
                        trim(std::string_view(line).substr(eq + 1)), line_no};
        if (e.key.empty()) throw ParseError("empty key", line_no, source);
        if (e.value.empty()) throw ParseError("empty value for '" + e.key + "'", line_no, source);
        if (doc.find(section, e.key) != nullptr)
            throw ParseError("duplicate key '" + e.key + "'", line_no, source);
        doc.entries_.push_back(std::move(e));
    }
    return doc;
}

KeyValueDocument KeyValueDocument::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

KeyValueDocument KeyValueDocument::from_entries(std::vector<KeyValueEntry> entries, std::string source) {
    KeyValueDocument doc;
    doc.source_ = std::move(source);
    for (const auto& e : entries)
        if (!e.section.empty() && !doc.has_section(e.section)) doc.sections_.push_back(e.section);
    doc.entries_ = std::move(entries);
    return doc;
}

bool KeyValueDocument::has_section(const std::string& section) const {
    return std::find(sections_.begin(), sections_.end(), section) != sections_.end();
}

std::vector<std::string> KeyValueDocument::sections() const { return sections_; }

const KeyValueEntry* KeyValueDocument::find(const std::string& section, const std::string& key) const {
    for (const auto& e : entries_)
        if (e.section == section && e.key == key) return &e;
    return nullptr;
}

std::vector<const KeyValueEntry*> KeyValueDocument::in_section(const std::string& section) const {
    std::vector<const KeyValueEntry*> out;
    for (const auto& e : entries_)
        if (e.section == section) out.push_back(&e);
    return out;
}

double parse_double_text(const std::string& text, std::size_t line, const std::string& source) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v))
        throw ParseError("expected a number, got '" + text + "'", line, source);
    return v;
}

double parse_double(const KeyValueEntry& e, const std::string& source) {
    return parse_double_text(e.value, e.line, source);
}

int parse_int(const KeyValueEntry& e, const std::string& source) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
    if (ec != std::errc{} || ptr != e.value.data() + e.value.size())
        throw ParseError("expected an integer for '" + e.key + "', got '" + e.value + "'", e.line,
                         source);
    return v;
}

bool parse_bool(const KeyValueEntry& e, const std::string& source) {
    const auto& v = e.value;
    if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "off" || v == "no" || v == "0") return false;
    throw ParseError("expected on/off for '" + e.key + "', got '" + v + "'", e.line, source);
}

}  // namespace spiralq
