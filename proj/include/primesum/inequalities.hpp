#pragma once

/// @file inequalities.hpp
/// Exact verification of the Mandl, Hassani, refined Mandl and Robin prime-sum inequalities, and
/// scans that locate the index from which each one holds.
///
/// Mandl, Hassani and Robin are decided on 128-bit integers after clearing denominators:
///   Mandl          2 S_n < n p_n
///   Hassani        28 S_n < 14 n p_n - 2 n^2
///   Robin          n p_{floor(n/2)} < S_{n-1}
/// The refined Mandl bound has irrational terms; it is evaluated in double and re-decided in
/// 50-digit arithmetic whenever the double margin falls within 64 ulps of zero.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

#include "asymptotics.hpp"
#include "errors.hpp"
#include "int128.hpp"
#include "prime_engine.hpp"

namespace primesum {

enum class inequality_kind { mandl, hassani, mandl_refined, robin };

inline constexpr std::array<inequality_kind, 4> all_inequality_kinds = {
    inequality_kind::mandl, inequality_kind::hassani, inequality_kind::mandl_refined, inequality_kind::robin};

inline std::string_view name(inequality_kind k) {
    switch (k) {
    case inequality_kind::mandl: return "mandl";
    case inequality_kind::hassani: return "hassani";
    case inequality_kind::mandl_refined: return "mandl-refined";
    case inequality_kind::robin: return "robin";
    }
    return "?";
}

inline inequality_kind inequality_kind_from_name(std::string_view s) {
    for (auto k : all_inequality_kinds)
        if (name(k) == s) return k;
    throw domain_error("unknown inequality kind '" + std::string(s) + "'");
}

/// Smallest n at which the inequality is defined.
inline constexpr std::uint64_t min_index(inequality_kind k) {
    switch (k) {
    case inequality_kind::mandl_refined: return 3;
    case inequality_kind::robin: return 4;
    default: return 1;
    }
}

/// Start of the range over which the inequality is asserted to hold, if an explicit one is stated.
inline constexpr std::optional<std::uint64_t> claimed_from(inequality_kind k) {
    switch (k) {
    case inequality_kind::mandl: return 9;
    case inequality_kind::hassani: return 10;
    case inequality_kind::mandl_refined: return 835;
    case inequality_kind::robin: return std::nullopt;
    }
    return std::nullopt;
}

/// Exact margin (RHS - LHS after clearing denominators) or a real margin for the refined bound.
using margin_value = std::variant<int128, double>;

struct verification_record {
    std::uint64_t n;
    inequality_kind kind;
    bool holds;
    margin_value margin;
    /// The double margin was inside the guard band and the verdict came from 50-digit arithmetic.
    bool guarded = false;
    /// Guarded, and the 50-digit verdict differs from the plain double one.
    bool flipped = false;
};

namespace detail {

inline constexpr int guard_band_ulps = 64;

inline high_precision to_high_precision(uint128 v) {
    const auto hi = static_cast<std::uint64_t>(v >> 64);
    const auto lo = static_cast<std::uint64_t>(v);
    return high_precision(hi) * high_precision("18446744073709551616") + high_precision(lo);
}

/// Decides `rhs > lhs` in double unless the difference is within the guard band, in which case the
/// verdict and margin come from `exact_margin()`.
template <typename ExactMargin>
verification_record guarded_decision(std::uint64_t n, double rhs, double lhs, ExactMargin&& exact_margin) {
    const double margin = rhs - lhs;
    const double scale = std::max(std::abs(rhs), std::abs(lhs));
    const double ulp = std::nextafter(scale, INFINITY) - scale;
    verification_record rec{n, inequality_kind::mandl_refined, margin > 0, margin};
    if (std::abs(margin) <= guard_band_ulps * ulp) {
        const high_precision precise = exact_margin();
        const bool holds = precise > 0;
        rec.guarded = true;
        rec.flipped = holds != rec.holds;
        rec.holds = holds;
        rec.margin = precise.template convert_to<double>();
    }
    return rec;
}

/// Refined-Mandl decision from raw (n, p_n, S_n).
inline verification_record decide_refined(std::uint64_t n, std::uint64_t p, uint128 s) {
    return guarded_decision(n, mandl_rhs_refined<double>(n, p), static_cast<double>(to_long_double(s)),
                            [&] { return mandl_rhs_refined<high_precision>(n, p) - to_high_precision(s); });
}

} // namespace detail

/// Decides one inequality at one n.
template <typename Prime>
verification_record check(inequality_kind kind, std::uint64_t n, const basic_prime_store<Prime>& store) {
    if (n < min_index(kind))
        throw domain_error(std::string(name(kind)) + " is defined for n >= " + std::to_string(min_index(kind)) +
                           ", got n = " + std::to_string(n));
    if (n > store.count())
        throw out_of_range("n = " + std::to_string(n) + " exceeds store coverage " + std::to_string(store.count()));
    const auto nn = static_cast<int128>(n);
    int128 margin = 0;
    switch (kind) {
    case inequality_kind::mandl:
        margin = nn * static_cast<int128>(store.nth_prime(n)) - 2 * static_cast<int128>(store.prefix_sum(n));
        break;
    case inequality_kind::hassani:
        margin = 14 * nn * static_cast<int128>(store.nth_prime(n)) - 2 * nn * nn -
                 28 * static_cast<int128>(store.prefix_sum(n));
        break;
    case inequality_kind::robin:
        margin = static_cast<int128>(store.prefix_sum(n - 1)) - nn * static_cast<int128>(store.nth_prime(n / 2));
        break;
    case inequality_kind::mandl_refined:
        return detail::decide_refined(n, store.nth_prime(n), store.prefix_sum(n));
    }
    return {n, kind, margin > 0, margin};
}

struct scan_report {
    inequality_kind kind;
    std::uint64_t n_lo;
    std::uint64_t n_hi;
    std::vector<std::uint64_t> violations;
    std::optional<std::uint64_t> largest_violation;
    /// Smallest N with the inequality holding on all of [N, n_hi]; n_hi + 1 when it fails at n_hi.
    std::uint64_t threshold;
    std::uint64_t guarded = 0;
    std::uint64_t flipped = 0;
};

namespace detail {

template <typename Prime>
void validate_scan(inequality_kind kind, std::uint64_t& n_lo, std::uint64_t n_hi, const basic_prime_store<Prime>& store) {
    if (kind == inequality_kind::robin && n_lo < 4) throw domain_error("robin scan needs n_lo >= 4");
    // ln ln n is negative below 3; the refined bound starts there.
    if (kind == inequality_kind::mandl_refined) n_lo = std::max<std::uint64_t>(n_lo, 3);
    if (n_lo < 1 || n_lo > n_hi)
        throw out_of_range("scan range [" + std::to_string(n_lo) + ", " + std::to_string(n_hi) + "] is empty");
    if (n_hi > store.count())
        throw out_of_range("scan upper end " + std::to_string(n_hi) + " exceeds store coverage " +
                           std::to_string(store.count()));
}

inline void finish(scan_report& r) {
    if (!r.violations.empty()) r.largest_violation = r.violations.back();
    r.threshold = r.largest_violation ? *r.largest_violation + 1 : r.n_lo;
}

} // namespace detail

/// Checks every n in [n_lo, n_hi], calling `visit` on each record in ascending order.
template <typename Prime>
scan_report scan(inequality_kind kind, std::uint64_t n_lo, std::uint64_t n_hi, const basic_prime_store<Prime>& store,
                 const std::function<void(const verification_record&)>& visit) {
    detail::validate_scan(kind, n_lo, n_hi, store);
    scan_report r{kind, n_lo, n_hi, {}, {}, 0};
    for (std::uint64_t n = n_lo; n <= n_hi; ++n) {
        const auto rec = check(kind, n, store);
        if (!rec.holds) r.violations.push_back(n);
        r.guarded += rec.guarded;
        r.flipped += rec.flipped;
        if (visit) visit(rec);
    }
    detail::finish(r);
    return r;
}

/// Checks every n in [n_lo, n_hi] on up to `threads` workers; the result does not depend on the split.
template <typename Prime>
scan_report scan(inequality_kind kind, std::uint64_t n_lo, std::uint64_t n_hi, const basic_prime_store<Prime>& store,
                 unsigned threads = 1) {
    detail::validate_scan(kind, n_lo, n_hi, store);
    const std::uint64_t len = n_hi - n_lo + 1;
    threads = static_cast<unsigned>(std::clamp<std::uint64_t>(threads, 1, std::max<std::uint64_t>(len / 1024, 1)));
    std::vector<scan_report> parts(threads);
    {
        std::vector<std::jthread> workers;
        const std::uint64_t chunk = (len + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::uint64_t a = n_lo + t * chunk;
            const std::uint64_t b = std::min(n_hi, a + chunk - 1);
            if (a > n_hi) break;
            auto work = [&, a, b, t] { parts[t] = scan(kind, a, b, store, nullptr); };
            if (threads == 1)
                work();
            else
                workers.emplace_back(work);
        }
    }
    scan_report r{kind, n_lo, n_hi, {}, {}, 0};
    for (const auto& p : parts) {
        r.violations.insert(r.violations.end(), p.violations.begin(), p.violations.end());
        r.guarded += p.guarded;
        r.flipped += p.flipped;
    }
    detail::finish(r);
    return r;
}

/// Threshold of a scan from the smallest admissible index up to n_hi.
template <typename Prime>
std::uint64_t find_threshold(inequality_kind kind, std::uint64_t n_hi, const basic_prime_store<Prime>& store,
                             unsigned threads = 1) {
    const auto r = scan(kind, min_index(kind), n_hi, store, threads);
    if (r.threshold > n_hi)
        throw degenerate_input(std::string(name(kind)) + " fails at every n up to " + std::to_string(n_hi) +
                               "; no threshold in range");
    return r.threshold;
}

} // namespace primesum
