#include "hfusion/kv_text.hpp"

#include <cerrno>
#include <cstdlib>
#include <set>
#include <utility>

#include "hfusion/errors.hpp"

namespace hfusion {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<KeyValue> parse_key_values(std::string_view text) {
    std::vector<KeyValue> out;
    std::set<std::pair<std::string, std::string>> seen;
    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = std::min(text.find('\n', pos), text.size());
        const std::string line = trim(text.substr(pos, nl - pos));
        ++line_no;
        pos = nl + 1;
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                throw FormatError("malformed section header '" + line + "'", line_no);
            }
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw FormatError("expected 'key = value', got '" + line + "'", line_no);
        }
        KeyValue kv{section, trim(std::string_view(line).substr(0, eq)),
                    trim(std::string_view(line).substr(eq + 1)), line_no};
        if (kv.key.empty()) throw FormatError("empty key", line_no);
        if (!seen.emplace(kv.section, kv.key).second) {
            throw FormatError("duplicate key '" + kv.key + "'", line_no);
        }
        out.push_back(std::move(kv));
    }
    return out;
}

unsigned long long parse_unsigned(const KeyValue& kv) {
    const std::string& v = kv.value;
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
        throw FormatError("'" + kv.key + "' expects a non-negative integer, got '" + v + "'", kv.line);
    }
    errno = 0;
    const unsigned long long x = std::strtoull(v.c_str(), nullptr, 10);
    if (errno == ERANGE) throw FormatError("'" + kv.key + "' is out of range", kv.line);
    return x;
}

double parse_double(const KeyValue& kv) {
    const std::string& v = kv.value;
    char* end = nullptr;
    errno = 0;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) {
        throw FormatError("'" + kv.key + "' expects a number, got '" + v + "'", kv.line);
    }
    return x;
}

}  // namespace hfusion
