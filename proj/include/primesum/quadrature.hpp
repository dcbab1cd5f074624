#pragma once

/// @file quadrature.hpp
/// Adaptive Simpson quadrature and the numerical checks built on it: term-by-term validation of
/// the integral expansions behind the prime-sum formula, and the monotone sum-versus-integral bound.

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asymptotics.hpp"
#include "errors.hpp"

namespace primesum {

struct quadrature_options {
    double tol = 1e-10;  ///< relative: the error estimate is kept below tol * (1 + |result|)
    int max_depth = 60;
};

namespace detail {

template <typename F>
double simpson_step(const F& f, double a, double fa, double b, double fb, double m, double fm, double whole,
                    double eps, int depth, int max_depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6 * (fa + 4 * flm + fm);
    const double right = (b - m) / 6 * (fm + 4 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15 * eps) return left + right + delta / 15;
    if (depth >= max_depth)
        throw non_convergence("adaptive Simpson: depth cap " + std::to_string(max_depth) + " reached on [" +
                              std::to_string(a) + ", " + std::to_string(b) + "]");
    return simpson_step(f, a, fa, m, fm, lm, flm, left, eps / 2, depth + 1, max_depth) +
           simpson_step(f, m, fm, b, fb, rm, frm, right, eps / 2, depth + 1, max_depth);
}

} // namespace detail

/// Integral of f over [a, b] by adaptive Simpson with Richardson correction.
template <typename F>
double adaptive_simpson(const F& f, double a, double b, const quadrature_options& opt = {}) {
    if (!(opt.tol > 0)) throw domain_error("quadrature tolerance must be positive");
    if (a == b) return 0.0;
    // Coarse composite estimate sets the absolute target.
    constexpr int coarse = 16;
    const double h = (b - a) / coarse;
    std::array<double, coarse + 1> fx{};
    for (int i = 0; i <= coarse; ++i) fx[i] = f(a + h * i);
    double rough = 0;
    for (int i = 0; i < coarse; i += 2) rough += h / 3 * (fx[i] + 4 * fx[i + 1] + fx[i + 2]);
    const double eps = opt.tol * (1 + std::abs(rough)) / (coarse / 2);
    double total = 0;
    for (int i = 0; i < coarse; i += 2) {
        const double x0 = a + h * i;
        const double x2 = (i + 2 == coarse) ? b : a + h * (i + 2);
        const double whole = h / 3 * (fx[i] + 4 * fx[i + 1] + fx[i + 2]);
        total += detail::simpson_step(f, x0, fx[i], x2, fx[i + 2], a + h * (i + 1), fx[i + 1], whole, eps, 0,
                                      opt.max_depth);
    }
    return total;
}

/// The eight integrands obtained from the order-2 Cipolla form of p(x).
enum class integrand_term {
    x_ln_x,
    x_lnln_x,
    x,
    x_lnln_over_ln,
    x_over_ln,
    x_lnln_sq_over_ln2,
    x_lnln_over_ln2,
    x_over_ln2,
};

inline constexpr std::array<integrand_term, 8> all_integrand_terms = {
    integrand_term::x_ln_x,         integrand_term::x_lnln_x,           integrand_term::x,
    integrand_term::x_lnln_over_ln, integrand_term::x_over_ln,          integrand_term::x_lnln_sq_over_ln2,
    integrand_term::x_lnln_over_ln2, integrand_term::x_over_ln2,
};

inline std::string_view name(integrand_term t) {
    switch (t) {
    case integrand_term::x_ln_x: return "x_ln_x";
    case integrand_term::x_lnln_x: return "x_lnln_x";
    case integrand_term::x: return "x";
    case integrand_term::x_lnln_over_ln: return "x_lnln_over_ln";
    case integrand_term::x_over_ln: return "x_over_ln";
    case integrand_term::x_lnln_sq_over_ln2: return "x_lnln_sq_over_ln2";
    case integrand_term::x_lnln_over_ln2: return "x_lnln_over_ln2";
    case integrand_term::x_over_ln2: return "x_over_ln2";
    }
    return "?";
}

inline integrand_term integrand_term_from_name(std::string_view s) {
    for (auto t : all_integrand_terms)
        if (name(t) == s) return t;
    throw domain_error("unknown integrand term '" + std::string(s) + "'");
}

/// Multiplier of the term inside x ln x + x ln ln x - x + (x ln ln x - 2x)/ln x - (x ln^2 ln x - 6x ln ln x + 11x)/(2 ln^2 x).
inline rational sign_and_scale(integrand_term t) {
    switch (t) {
    case integrand_term::x_ln_x: return 1;
    case integrand_term::x_lnln_x: return 1;
    case integrand_term::x: return -1;
    case integrand_term::x_lnln_over_ln: return 1;
    case integrand_term::x_over_ln: return -2;
    case integrand_term::x_lnln_sq_over_ln2: return rational(-1, 2);
    case integrand_term::x_lnln_over_ln2: return 3;
    case integrand_term::x_over_ln2: return rational(-11, 2);
    }
    return 0;
}

/// Bare integrand (without its multiplier) at x >= 3.
inline double integrand(integrand_term t, double x) {
    const double L = std::log(x);
    switch (t) {
    case integrand_term::x_ln_x: return x * L;
    case integrand_term::x_lnln_x: return x * std::log(L);
    case integrand_term::x: return x;
    case integrand_term::x_lnln_over_ln: return x * std::log(L) / L;
    case integrand_term::x_over_ln: return x / L;
    case integrand_term::x_lnln_sq_over_ln2: {
        const double LL = std::log(L);
        return x * LL * LL / (L * L);
    }
    case integrand_term::x_lnln_over_ln2: return x * std::log(L) / (L * L);
    case integrand_term::x_over_ln2: return x / (L * L);
    }
    return 0;
}

/// coefficient * n^n_power * L^L_power * LL^LL_power
struct monomial {
    rational coefficient;
    int n_power;
    int L_power;
    int LL_power;

    double eval(const log_pair<double>& lp) const {
        return detail::to_real<double>(coefficient) * std::pow(static_cast<double>(lp.n), n_power) *
               std::pow(lp.L, L_power) * std::pow(lp.LL, LL_power);
    }
};

/// Asymptotic form of the bare integral from 3 to n: main terms plus the order of the dropped remainder.
/// A remainder of O(1) is represented by a unit error scale.
struct expansion_claim {
    integrand_term term;
    std::vector<monomial> main_terms;
    monomial error_scale;

    /// Power of 1/L in the printed remainder.
    int error_exponent() const { return -error_scale.L_power; }

    double main_value(const log_pair<double>& lp) const {
        double s = 0;
        for (const auto& m : main_terms) s += m.eval(lp);
        return s;
    }
};

/// Printed expansions divided through by each term's multiplier.
/// The x/ln^2 x remainder is printed as O(n^2 ln n / ln^3 n), i.e. the same order as its main term;
/// it is kept as n^2/L^2 here.
inline expansion_claim claim_for(integrand_term t) {
    using r = rational;
    switch (t) {
    case integrand_term::x_ln_x:
        return {t, {{r(1, 2), 2, 1, 0}, {r(-1, 4), 2, 0, 0}}, {r(1), 0, 0, 0}};
    case integrand_term::x_lnln_x:
        return {t, {{r(1, 2), 2, 0, 1}, {r(-1, 4), 2, -1, 0}, {r(-1, 8), 2, -2, 0}}, {r(1), 2, -3, 0}};
    case integrand_term::x:
        return {t, {{r(1, 2), 2, 0, 0}}, {r(1), 0, 0, 0}};
    case integrand_term::x_lnln_over_ln:
        return {t, {{r(1, 2), 2, -1, 1}, {r(1, 4), 2, -2, 1}, {r(-1, 4), 2, -1, 0}}, {r(1), 2, -3, 1}};
    case integrand_term::x_over_ln:
        return {t, {{r(1, 2), 2, -1, 0}, {r(1, 4), 2, -2, 0}}, {r(1), 2, -3, 0}};
    case integrand_term::x_lnln_sq_over_ln2:
        return {t, {{r(1, 2), 2, -2, 2}}, {r(1), 2, -3, 2}};
    case integrand_term::x_lnln_over_ln2:
        return {t, {{r(1, 2), 2, -2, 1}}, {r(1), 2, -3, 2}};
    case integrand_term::x_over_ln2:
        return {t, {{r(1, 2), 2, -2, 0}}, {r(1), 2, -2, 0}};
    }
    throw domain_error("unknown integrand term");
}

/// Lower integration limit shared by all term checks.
inline constexpr double term_lower_limit = 3.0;

inline double integrate(integrand_term term, double a, double b, double tol = quadrature_options{}.tol) {
    if (!(a >= term_lower_limit)) throw domain_error("integrate: lower limit must be >= 3");
    if (!(b > a)) throw domain_error("integrate: need b > a");
    if (!(tol > 0)) throw domain_error("integrate: tol must be positive");
    return adaptive_simpson([term](double x) { return integrand(term, x); }, a, b, {tol, 60});
}

struct term_residual {
    std::uint64_t n;
    double numeric;      ///< integral of the bare integrand over [3, n]
    double closed_form;  ///< main terms of the claim at n
    double scaled_residual;
};

/// (numeric - closed form) / error scale for every n in the grid.
inline std::vector<term_residual> verify_term_expansion(integrand_term term, std::span<const std::uint64_t> n_grid,
                                                        double tol = quadrature_options{}.tol) {
    const auto claim = claim_for(term);
    std::vector<term_residual> out;
    out.reserve(n_grid.size());
    for (const auto n : n_grid) {
        if (n < 10) throw domain_error("verify_term_expansion: grid points must be >= 10");
        const auto lp = log_pair<double>::of(n);
        const double numeric = integrate(term, term_lower_limit, static_cast<double>(n), tol);
        const double closed = claim.main_value(lp);
        out.push_back({n, numeric, closed, (numeric - closed) / claim.error_scale.eval(lp)});
    }
    return out;
}

enum class monotone_fn { sqrt, ln, x_ln_x };

inline std::string_view name(monotone_fn f) {
    switch (f) {
    case monotone_fn::sqrt: return "sqrt";
    case monotone_fn::ln: return "ln";
    case monotone_fn::x_ln_x: return "x_ln_x";
    }
    return "?";
}

inline double evaluate(monotone_fn f, double x) {
    switch (f) {
    case monotone_fn::sqrt: return std::sqrt(x);
    case monotone_fn::ln: return std::log(x);
    case monotone_fn::x_ln_x: return x * std::log(x);
    }
    return 0;
}

struct euler_sum_result {
    double sum;
    double integral;
    double bound_ratio;  ///< |sum - integral| / (|f(n)| + |f(1)|)
};

/// Compares f(1) + ... + f(n) with the integral of f over [1, n].
inline euler_sum_result euler_sum_check(monotone_fn f, std::uint64_t n, double tol = 1e-12) {
    if (n < 1) throw domain_error("euler_sum_check: n must be >= 1");
    long double sum = 0;
    for (std::uint64_t r = 1; r <= n; ++r) sum += evaluate(f, static_cast<double>(r));
    const double integral =
        n == 1 ? 0.0 : adaptive_simpson([f](double x) { return evaluate(f, x); }, 1.0, static_cast<double>(n), {tol, 60});
    const double denom = std::abs(evaluate(f, static_cast<double>(n))) + std::abs(evaluate(f, 1.0));
    const double diff = std::abs(static_cast<double>(sum) - integral);
    return {static_cast<double>(sum), integral, denom == 0 ? 0.0 : diff / denom};
}

} // namespace primesum
