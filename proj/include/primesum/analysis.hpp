#pragma once

/// @file analysis.hpp
/// Residual tables comparing exact prime data with the asymptotic formulas, trend classification of
/// the scaled residuals, and the empirical estimate of the n^2/L^2 coefficient in S_n - n p_n / 2.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "asymptotics.hpp"
#include "errors.hpp"
#include "int128.hpp"
#include "prime_engine.hpp"

namespace primesum {

/// Geometric grid of `points` integers from n_min to n_max.
struct grid_spec {
    std::uint64_t n_min = 10'000;
    std::uint64_t n_max = 10'000'000;
    std::uint64_t points = 13;

    void validate() const {
        if (n_min < 10) throw domain_error("grid: n_min must be >= 10");
        if (n_max <= n_min) throw domain_error("grid: n_max must exceed n_min");
        if (points < 3) throw domain_error("grid: at least 3 points required");
    }

    std::vector<std::uint64_t> values() const {
        validate();
        std::vector<std::uint64_t> out;
        const double ratio = std::log(static_cast<double>(n_max) / static_cast<double>(n_min));
        for (std::uint64_t i = 0; i < points; ++i) {
            std::uint64_t v = i + 1 == points
                                  ? n_max
                                  : static_cast<std::uint64_t>(std::llround(
                                        static_cast<double>(n_min) *
                                        std::exp(ratio * static_cast<double>(i) / static_cast<double>(points - 1))));
            if (out.empty() || v > out.back()) out.push_back(v);
        }
        return out;
    }
};

enum class residual_target { sum_m0, sum_m1, sum_m2, pn_m2, lemma31_paper, lemma31_derived, robin_gap };

inline constexpr std::array<residual_target, 7> all_residual_targets = {
    residual_target::sum_m0,        residual_target::sum_m1,          residual_target::sum_m2,
    residual_target::pn_m2,         residual_target::lemma31_paper,   residual_target::lemma31_derived,
    residual_target::robin_gap};

inline std::string_view name(residual_target t) {
    switch (t) {
    case residual_target::sum_m0: return "sum_m0";
    case residual_target::sum_m1: return "sum_m1";
    case residual_target::sum_m2: return "sum_m2";
    case residual_target::pn_m2: return "pn_m2";
    case residual_target::lemma31_paper: return "lemma31_paper";
    case residual_target::lemma31_derived: return "lemma31_derived";
    case residual_target::robin_gap: return "robin_gap";
    }
    return "?";
}

inline residual_target residual_target_from_name(std::string_view s) {
    for (auto t : all_residual_targets)
        if (name(t) == s) return t;
    throw domain_error("unknown residual target '" + std::string(s) + "'");
}

struct residual_row {
    std::uint64_t n;
    int128 exact;
    double approx;
    double abs_err;     ///< exact - approx
    double scaled_err;  ///< abs_err / error scale of the target
    /// Half an ulp of `exact` as a double: bound on what converting it to floating point can cost.
    double conversion_noise;
};

/// Comparison scale: n^2/(2 L^m) for sum targets, n/L^2 for p_n, n^2/L^2 for the lemma 3.1 forms,
/// n^2 LL / L for the Robin gap.
inline double error_scale(residual_target t, const log_pair<double>& lp) {
    const auto n = static_cast<double>(lp.n);
    switch (t) {
    case residual_target::sum_m0: return n * n / 2;
    case residual_target::sum_m1: return n * n / (2 * lp.L);
    case residual_target::sum_m2: return n * n / (2 * lp.L * lp.L);
    case residual_target::pn_m2: return n / (lp.L * lp.L);
    case residual_target::lemma31_paper:
    case residual_target::lemma31_derived: return n * n / (lp.L * lp.L);
    case residual_target::robin_gap: return n * n * lp.LL / lp.L;
    }
    return 1;
}

namespace detail {

template <typename Prime>
residual_row make_row(residual_target t, std::uint64_t n, const basic_prime_store<Prime>& store) {
    const auto lp = log_pair<double>::of(n);
    int128 exact = 0;
    double approx = 0;
    switch (t) {
    case residual_target::sum_m0:
    case residual_target::sum_m1:
    case residual_target::sum_m2: {
        const int m = static_cast<int>(t) - static_cast<int>(residual_target::sum_m0);
        exact = static_cast<int128>(store.prefix_sum(n));
        approx = sum_expansion<double>(n, expansion_order(m));
        break;
    }
    case residual_target::pn_m2:
        exact = static_cast<int128>(store.nth_prime(n));
        approx = cipolla_p<double>(n, expansion_order(2));
        break;
    case residual_target::lemma31_paper:
    case residual_target::lemma31_derived: {
        const auto c = t == residual_target::lemma31_paper ? lemma31_constant::paper() : lemma31_constant::derived();
        exact = static_cast<int128>(store.prefix_sum(n));
        approx = lemma31_prediction<double>(n, store.nth_prime(n), c);
        break;
    }
    case residual_target::robin_gap:
        if (n < 4) throw domain_error("robin_gap needs n >= 4");
        exact = static_cast<int128>(store.prefix_sum(n - 1)) -
                static_cast<int128>(n) * static_cast<int128>(store.nth_prime(n / 2));
        approx = robin_gap_prediction<double>(n);
        break;
    }
    const long double exact_ld = to_long_double(exact);
    const auto abs_err = static_cast<double>(exact_ld - static_cast<long double>(approx));
    const double exact_d = std::abs(static_cast<double>(exact_ld));
    const double half_ulp = (std::nextafter(exact_d, INFINITY) - exact_d) / 2;
    return {n, exact, approx, abs_err, abs_err / error_scale(t, lp), half_ulp};
}

template <typename Prime>
void check_coverage(const std::vector<std::uint64_t>& ns, const basic_prime_store<Prime>& store) {
    if (!ns.empty() && ns.back() > store.count())
        throw out_of_range("grid reaches n = " + std::to_string(ns.back()) + " but the store holds " +
                           std::to_string(store.count()) + " primes");
}

} // namespace detail

/// One row per grid point, ascending in n.
template <typename Prime>
std::vector<residual_row> residual_table(residual_target t, const grid_spec& grid, const basic_prime_store<Prime>& store) {
    const auto ns = grid.values();
    detail::check_coverage(ns, store);
    std::vector<residual_row> rows;
    rows.reserve(ns.size());
    for (const auto n : ns) rows.push_back(detail::make_row(t, n, store));
    return rows;
}

enum class trend { decreasing, bounded, diverging };

inline std::string_view name(trend t) {
    switch (t) {
    case trend::decreasing: return "decreasing";
    case trend::bounded: return "bounded";
    case trend::diverging: return "diverging";
    }
    return "?";
}

struct trend_result {
    trend verdict;
    double slope;               ///< d log|scaled_err| / d log log n
    std::size_t used = 0;       ///< rows in the fit
    std::size_t excluded = 0;   ///< rows dropped for an exactly zero scaled error
};

inline constexpr double trend_slope_band = 0.05;

/// Least-squares slope of log|scaled_err| against log log n; |slope| < 0.05 counts as bounded.
inline trend_result trend_verdict(const std::vector<residual_row>& rows) {
    std::vector<double> xs, ys;
    std::size_t excluded = 0;
    for (const auto& r : rows) {
        if (r.scaled_err == 0) {
            ++excluded;
            continue;
        }
        if (!std::isfinite(r.scaled_err)) throw degenerate_input("trend_verdict: non-finite scaled error");
        xs.push_back(std::log(std::log(static_cast<double>(r.n))));
        ys.push_back(std::log(std::abs(r.scaled_err)));
    }
    if (xs.size() < 3)
        throw degenerate_input("trend_verdict: need at least 3 rows with nonzero scaled error, have " +
                               std::to_string(xs.size()));
    const auto k = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= k;
    my /= k;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0) throw degenerate_input("trend_verdict: all rows share the same n");
    const double slope = sxy / sxx;
    const trend v = slope < -trend_slope_band ? trend::decreasing
                    : slope > trend_slope_band ? trend::diverging
                                               : trend::bounded;
    return {v, slope, xs.size(), excluded};
}

struct constant_estimate {
    struct point {
        std::uint64_t n;
        double c_hat;
    };
    std::vector<point> points;
    /// Whichever of -49/8 and -5/8 (compared as -49 and -5 on the c_hat scale) is closer at the last point.
    lemma31_constant nearer;
};

/// c_hat(n) = (S_n - n p_n/2 + n^2/4 + n^2/(2L) - n^2 LL/(4L^2)) * 8 L^2 / n^2
template <typename Prime>
double lemma31_c_hat(std::uint64_t n, const basic_prime_store<Prime>& store) {
    const auto lp = log_pair<long double>::of(n);
    const auto nn = static_cast<long double>(n);
    const auto n2 = nn * nn;
    // 2 S_n - n p_n is exact in 128 bits
    const int128 twice_gap = 2 * static_cast<int128>(store.prefix_sum(n)) -
                             static_cast<int128>(n) * static_cast<int128>(store.nth_prime(n));
    const long double rest = to_long_double(twice_gap) / 2 + n2 / 4 + n2 / (2 * lp.L) - n2 * lp.LL / (4 * lp.L * lp.L);
    return static_cast<double>(rest * 8 * lp.L * lp.L / n2);
}

template <typename Prime>
constant_estimate lemma31_constant_estimate(const grid_spec& grid, const basic_prime_store<Prime>& store) {
    if (grid.n_min < 10'000) throw domain_error("lemma31_constant_estimate: n_min must be >= 10^4");
    const auto ns = grid.values();
    detail::check_coverage(ns, store);
    constant_estimate out{{}, lemma31_constant::derived()};
    for (const auto n : ns) out.points.push_back({n, lemma31_c_hat(n, store)});
    const double last = out.points.back().c_hat;
    out.nearer = std::abs(last + 49) < std::abs(last + 5) ? lemma31_constant::paper() : lemma31_constant::derived();
    return out;
}

} // namespace primesum
