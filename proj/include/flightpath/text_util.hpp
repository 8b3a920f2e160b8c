#pragma once

// Locale-independent number parsing/formatting and small line helpers used
// by every text format in the library.

#include <charconv>
#include <optional>
#include <string>
#include <string_view>

namespace flightpath {

inline std::string_view trim(std::string_view s) {
    const char* ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (s.empty())
        return std::nullopt;
    double v{};
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+')
        ++first;
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || p != last)
        return std::nullopt;
    return v;
}

inline std::optional<long long> parse_int(std::string_view s) {
    s = trim(s);
    if (s.empty())
        return std::nullopt;
    long long v{};
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+')
        ++first;
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || p != last)
        return std::nullopt;
    return v;
}

// Shortest representation that round-trips exactly.
inline std::string format_double_shortest(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

inline std::string format_double_general(double v, int significant) {
    char buf[48];
    auto [p, ec] =
        std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, significant);
    return std::string(buf, p);
}

// Fixed-point with the given decimals, trailing zeros (and a bare point)
// trimmed: 121.488440 -> "121.48844", 0.000000 -> "0".
inline std::string format_double_fixed_trim(double v, int decimals) {
    char buf[64];
    auto [p, ec] =
        std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, decimals);
    std::string s(buf, p);
    if (s.find('.') != std::string::npos) {
        while (!s.empty() && s.back() == '0')
            s.pop_back();
        if (!s.empty() && s.back() == '.')
            s.pop_back();
    }
    if (s == "-0")
        s = "0";
    return s;
}

// Canonical decimal for geometry sidecars: integral values keep one
// fractional digit ("90.0"), others print trimmed ("0.133").
inline std::string format_decimal_value(double v) {
    std::string s = format_double_general(v, 15);
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
        s += ".0";
    return s;
}

// Splits "key: value" at the first colon; returns nothing when no colon.
inline std::optional<std::pair<std::string_view, std::string_view>>
split_key_value(std::string_view line) {
    const auto pos = line.find(':');
    if (pos == std::string_view::npos)
        return std::nullopt;
    return std::make_pair(trim(line.substr(0, pos)), trim(line.substr(pos + 1)));
}

} // namespace flightpath
