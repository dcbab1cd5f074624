#pragma once

/// @file int128.hpp
/// 128-bit integer aliases and the few conversions the rest of the library needs.
/// Relies on the GCC/Clang __int128 extension.

#include <array>
#include <cstdint>
#include <string>
#include <type_traits>

namespace primesum {

__extension__ typedef unsigned __int128 uint128;
__extension__ typedef __int128 int128;

namespace detail {

inline std::string u128_digits(uint128 v) {
    if (v == 0) return "0";
    std::string out;
    while (v != 0) {
        out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    return {out.rbegin(), out.rend()};
}

} // namespace detail

inline std::string to_string(uint128 v) { return detail::u128_digits(v); }

inline std::string to_string(int128 v) {
    if (v >= 0) return detail::u128_digits(static_cast<uint128>(v));
    // negate in unsigned space so INT128_MIN is handled
    return "-" + detail::u128_digits(uint128{0} - static_cast<uint128>(v));
}

/// Parse a decimal string (optional leading '-') into int128. Returns false on malformed input or overflow.
inline bool parse_int128(const std::string& s, int128& out) {
    if (s.empty()) return false;
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '-') {
        neg = true;
        i = 1;
        if (s.size() == 1) return false;
    }
    constexpr uint128 limit = (~uint128{0}) >> 1;
    uint128 acc = 0;
    for (; i < s.size(); ++i) {
        const char c = s[i];
        if (c < '0' || c > '9') return false;
        const auto d = static_cast<uint128>(c - '0');
        if (acc > (limit - d) / 10) return false;
        acc = acc * 10 + d;
    }
    out = neg ? -static_cast<int128>(acc) : static_cast<int128>(acc);
    return true;
}

/// Round-to-nearest conversion. The split keeps both halves exact in long double (64-bit significand).
inline long double to_long_double(uint128 v) {
    const auto hi = static_cast<std::uint64_t>(v >> 64);
    const auto lo = static_cast<std::uint64_t>(v);
    return static_cast<long double>(hi) * 18446744073709551616.0L + static_cast<long double>(lo);
}

inline long double to_long_double(int128 v) {
    if (v >= 0) return to_long_double(static_cast<uint128>(v));
    return -to_long_double(uint128{0} - static_cast<uint128>(v));
}

inline std::array<unsigned char, 16> to_le_bytes(uint128 v) {
    std::array<unsigned char, 16> b{};
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    return b;
}

inline uint128 from_le_bytes(const std::array<unsigned char, 16>& b) {
    uint128 v = 0;
    for (std::size_t i = b.size(); i-- > 0;) v = (v << 8) | b[i];
    return v;
}

} // namespace primesum
