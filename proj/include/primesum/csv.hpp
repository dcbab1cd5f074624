#pragma once

/// @file csv.hpp
/// CSV field formatting: reals with 17 significant digits, exact integers in full decimal.

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>

#include "inequalities.hpp"
#include "int128.hpp"

namespace primesum::csv {

inline std::string real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return {buf, res.ptr};
}

inline std::string integer(int128 v) { return to_string(v); }
inline std::string integer(uint128 v) { return to_string(v); }

inline std::string margin(const margin_value& m) {
    if (const auto* exact = std::get_if<int128>(&m)) return to_string(*exact);
    return real(std::get<double>(m));
}

inline std::string_view boolean(bool b) { return b ? "true" : "false"; }

/// Writes `fields` comma-separated and LF-terminated.
template <typename... Fields>
void row(std::ostream& os, const Fields&... fields) {
    bool first = true;
    ((os << (first ? "" : ",") << fields, first = false), ...);
    os << '\n';
}

} // namespace primesum::csv
