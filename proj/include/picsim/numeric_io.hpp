#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>

namespace picsim {

// Format with 17 significant digits: enough text to reproduce any double
// bit-exactly on re-read, independent of the global locale.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

// Locale-independent parse of a whole token; nullopt on any trailing junk.
inline std::optional<double> parse_double(std::string_view token) {
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    if (token.empty()) return std::nullopt;
    double v = 0.0;
    const char* first = token.data();
    const char* last = first + token.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) return std::nullopt;
    return v;
}

inline std::optional<long long> parse_integer(std::string_view token) {
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    if (token.empty()) return std::nullopt;
    long long v = 0;
    const char* first = token.data();
    const char* last = first + token.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) return std::nullopt;
    return v;
}

}  // namespace picsim
