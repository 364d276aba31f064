#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "eflight/error.hpp"

namespace eflight::csv {

// Comma split with \r trimming; no quoting — none of the bundled formats
// place commas inside fields.
inline std::vector<std::string_view> split(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string_view> out;
    size_t start = 0;
    while (true) {
        size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

inline bool is_comment_or_blank(std::string_view line) {
    return line.empty() || line[0] == '#' || (line.size() == 1 && line[0] == '\r');
}

inline double parse_double(std::string_view field, std::string_view what, size_t line_no) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || p != field.data() + field.size())
        throw ValidationError("line " + std::to_string(line_no) + ": bad number for " +
                              std::string(what) + ": '" + std::string(field) + "'");
    return v;
}

inline std::int64_t parse_int(std::string_view field, std::string_view what, size_t line_no) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || p != field.data() + field.size())
        throw ValidationError("line " + std::to_string(line_no) + ": bad integer for " +
                              std::string(what) + ": '" + std::string(field) + "'");
    return v;
}

// CSV numeric formatting: integers verbatim, otherwise up to six decimals
// with trailing zeros trimmed. Keeps nine-digit kg totals exact and golden
// files platform-stable.
inline std::string format_number(double v) {
    if (v == static_cast<std::int64_t>(v) &&
        v >= -9.2e18 && v <= 9.2e18) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
        return buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s = buf;
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

}  // namespace eflight::csv
