#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace hfusion {

/// One `key = value` line. `section` is the most recent `[name]` header
/// (empty before the first one); `line` is 1-based.
struct KeyValue {
    std::string section;
    std::string key;
    std::string value;
    std::size_t line = 0;
};

/// Parses INI-style text: `[section]` headers, `key = value` pairs, blank
/// lines and `#`/`;` comment lines. Throws FormatError (offset = line) on
/// anything else or on a repeated key within a section.
std::vector<KeyValue> parse_key_values(std::string_view text);

std::string trim(std::string_view s);

unsigned long long parse_unsigned(const KeyValue& kv);
double parse_double(const KeyValue& kv);

}  // namespace hfusion
