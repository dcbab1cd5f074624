#pragma once

/// @file asymptotics.hpp
/// Closed-form asymptotic expansions for p_n and for the prime sum S_n = p_1 + ... + p_n,
/// together with the inequality right-hand sides derived from them.
///
/// Every formula is a template over the evaluation type so the same expression can be run in
/// `double` for bulk work and in `high_precision` (50 decimal digits) for guard-band decisions.
///
/// Sign convention. The correction polynomials enter as
///     p_n ~ n [L + LL - 1 + P_1(LL)/L - P_2(LL)/L^2]
///     S_n ~ n^2/2 [L + LL - 3/2 + S_1(LL)/L - S_2(LL)/L^2]
/// with L = ln n, LL = ln ln n. This is the classical Cipolla form. A (-1)^r P_r(LL)/L^r reading
/// of the general-m statement would flip the first-order sign and disagree with the explicit
/// expansions; it is not implemented.

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/rational.hpp>

#include "errors.hpp"

namespace primesum {

using rational = boost::rational<std::int64_t>;
using high_precision = boost::multiprecision::cpp_bin_float_50;

/// (ln n, ln ln n) computed once per n.
template <typename Real = double>
struct log_pair {
    std::uint64_t n;
    Real L;
    Real LL;

    static log_pair of(std::uint64_t n) {
        using std::log;
        if (n < 3) throw domain_error("ln ln n requires n >= 3, got n = " + std::to_string(n));
        Real L = log(Real(n));
        return {n, L, log(L)};
    }
};

/// Truncation order of an expansion; only m in {0, 1, 2} has known coefficients.
class expansion_order {
public:
    constexpr explicit expansion_order(int m) : m_(m) {
        if (m < 0 || m > 2) throw domain_error("expansion order must be 0, 1 or 2");
    }
    constexpr int value() const noexcept { return m_; }
    friend constexpr bool operator==(expansion_order, expansion_order) = default;

private:
    int m_;
};

/// Polynomial with rational coefficients, stored lowest degree first.
class rational_poly {
public:
    explicit rational_poly(std::vector<rational> coeffs) : c_(std::move(coeffs)) {
        // mixed rational/int == recurses under C++20 operator rewriting in older Boost
        while (c_.size() > 1 && c_.back() == rational(0)) c_.pop_back();
    }

    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    rational leading() const { return c_.back(); }
    rational coefficient(int k) const { return k <= degree() ? c_[static_cast<std::size_t>(k)] : rational(0); }

    rational operator()(rational x) const {
        rational acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    template <typename Real>
    Real eval(const Real& x) const {
        Real acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            acc = acc * x + Real(it->numerator()) / Real(it->denominator());
        return acc;
    }

    friend bool operator==(const rational_poly&, const rational_poly&) = default;

private:
    std::vector<rational> c_;
};

/// Cipolla's P_m for m = 1, 2: P_1(x) = x - 2, P_2(x) = (x^2 - 6x + 11)/2.
inline const rational_poly& cipolla_poly(int m) {
    static const rational_poly p1({rational(-2), rational(1)});
    static const rational_poly p2({rational(11, 2), rational(-3), rational(1, 2)});
    if (m == 1) return p1;
    if (m == 2) return p2;
    throw domain_error("Cipolla polynomial only available for m = 1, 2");
}

/// Prime-sum correction S_m for m = 1, 2: S_1(x) = x - 3, S_2(x) = x^2/2 - 7x/2 + 27/4.
inline const rational_poly& sum_poly(int m) {
    static const rational_poly s1({rational(-3), rational(1)});
    static const rational_poly s2({rational(27, 4), rational(-7, 2), rational(1, 2)});
    if (m == 1) return s1;
    if (m == 2) return s2;
    throw domain_error("sum polynomial only available for m = 1, 2");
}

namespace detail {

template <typename Real>
Real to_real(rational r) {
    return Real(r.numerator()) / Real(r.denominator());
}

// Order-m truncation of c0 + Q_1(LL)/L - Q_2(LL)/L^2.
template <typename Real>
Real truncated_bracket(const log_pair<Real>& lp, Real head, const rational_poly& q1, const rational_poly& q2,
                       expansion_order order) {
    Real b = lp.L + lp.LL + head;
    if (order.value() >= 1) b += q1.eval(lp.LL) / lp.L;
    if (order.value() >= 2) b -= q2.eval(lp.LL) / (lp.L * lp.L);
    return b;
}

} // namespace detail

/// Cipolla approximation of p_n truncated at `order`.
template <typename Real = double>
Real cipolla_p(std::uint64_t n, expansion_order order) {
    const auto lp = log_pair<Real>::of(n);
    return Real(n) * detail::truncated_bracket(lp, Real(-1), cipolla_poly(1), cipolla_poly(2), order);
}

/// Asymptotic approximation of S_n truncated at `order`; order 0 is n^2/2 (L + LL - 3/2).
template <typename Real = double>
Real sum_expansion(std::uint64_t n, expansion_order order) {
    const auto lp = log_pair<Real>::of(n);
    const Real nn = Real(n);
    return nn * nn / 2 * detail::truncated_bracket(lp, Real(-3) / 2, sum_poly(1), sum_poly(2), order);
}

/// n p_n / 2 - n^2/4 - n^2/(2L) + n^2 LL/(4L^2), with p_n supplied exactly by the caller.
template <typename Real = double>
Real mandl_rhs_refined(std::uint64_t n, std::uint64_t p_n) {
    const auto lp = log_pair<Real>::of(n);
    const Real nn = Real(n);
    const Real n2 = nn * nn;
    return nn * Real(p_n) / 2 - n2 / 4 - n2 / (2 * lp.L) + n2 * lp.LL / (4 * lp.L * lp.L);
}

/// Which value to use for the n^2/L^2 coefficient in the S_n - n p_n/2 expansion.
struct lemma31_constant {
    enum class choice { paper, derived };

    choice which;
    rational value;

    /// -49/8, as printed.
    static lemma31_constant paper() { return {choice::paper, rational(-49, 8)}; }
    /// -5/8, from subtracting the order-2 Cipolla expansion of n p_n / 2 from the order-2 sum expansion.
    static lemma31_constant derived() { return {choice::derived, rational(-5, 8)}; }

    static lemma31_constant from_name(std::string_view name) {
        if (name == "paper") return paper();
        if (name == "derived") return derived();
        throw domain_error("unknown coefficient choice '" + std::string(name) + "' (expected paper|derived)");
    }

    std::string_view name() const { return which == choice::paper ? "paper" : "derived"; }
};

template <typename Real = double>
Real lemma31_prediction(std::uint64_t n, std::uint64_t p_n, const lemma31_constant& c) {
    const auto lp = log_pair<Real>::of(n);
    const Real nn = Real(n);
    return mandl_rhs_refined<Real>(n, p_n) + detail::to_real<Real>(c.value) * nn * nn / (lp.L * lp.L);
}

/// (2 ln 2 - 1)/4.
template <typename Real = double>
Real robin_gap_coefficient() {
    using std::log;
    return (2 * log(Real(2)) - 1) / 4;
}

/// Leading-order prediction (2 ln 2 - 1) n^2 / 4 for S_{n-1} - n p_{floor(n/2)}.
template <typename Real = double>
Real robin_gap_prediction(std::uint64_t n) {
    if (n < 4) throw domain_error("robin gap needs n >= 4, got n = " + std::to_string(n));
    const Real nn = Real(n);
    return robin_gap_coefficient<Real>() * nn * nn;
}

} // namespace primesum
