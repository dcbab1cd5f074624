#include <gtest/gtest.h>

#include <cmath>

#include "primesum/asymptotics.hpp"
#include "shared_store.hpp"

using namespace primesum;

TEST(LogPair, Values) {
    for (std::uint64_t n : {3ull, 10ull, 1000ull, 123456789ull}) {
        const auto lp = log_pair<double>::of(n);
        EXPECT_EQ(lp.n, n);
        EXPECT_DOUBLE_EQ(lp.L, std::log(static_cast<double>(n)));
        EXPECT_DOUBLE_EQ(lp.LL, std::log(lp.L));
        EXPECT_GT(lp.L, 1.0);
        EXPECT_GT(lp.LL, 0.0);
    }
    EXPECT_THROW(log_pair<double>::of(2), domain_error);
    EXPECT_THROW(log_pair<double>::of(0), domain_error);
}

TEST(ExpansionOrder, Range) {
    EXPECT_EQ(expansion_order(0).value(), 0);
    EXPECT_EQ(expansion_order(2).value(), 2);
    EXPECT_THROW(expansion_order(3), domain_error);
    EXPECT_THROW(expansion_order(-1), domain_error);
}

TEST(Polynomials, ExactIdentities) {
    EXPECT_EQ(cipolla_poly(1)(rational(2)), rational(0));
    EXPECT_EQ(cipolla_poly(2)(rational(3)), rational(1));
    EXPECT_EQ(sum_poly(1)(rational(3)), rational(0));
    EXPECT_EQ(sum_poly(2)(rational(0)), rational(27, 4));
    // P_2(x) = (x^2 - 6x + 11)/2 at a non-integer point
    EXPECT_EQ(cipolla_poly(2)(rational(1, 3)), rational(1, 18) - rational(1) + rational(11, 2));
}

TEST(Polynomials, DegreeAndLeadingCoefficient) {
    for (int m = 1; m <= 2; ++m) {
        EXPECT_EQ(cipolla_poly(m).degree(), m);
        EXPECT_EQ(sum_poly(m).degree(), m);
        EXPECT_EQ(cipolla_poly(m).leading(), rational(1, m));
        EXPECT_EQ(sum_poly(m).leading(), rational(1, m));
    }
    EXPECT_THROW(cipolla_poly(3), domain_error);
    EXPECT_THROW(sum_poly(0), domain_error);
}

TEST(Polynomials, FloatingEvaluationAgreesWithRational) {
    const rational x(7, 5);
    for (int m = 1; m <= 2; ++m) {
        const auto exact = sum_poly(m)(x);
        const double expected = static_cast<double>(exact.numerator()) / static_cast<double>(exact.denominator());
        EXPECT_NEAR(sum_poly(m).eval(1.4), expected, 1e-15);
    }
}

TEST(Lemma31Constant, DerivedValueFromPolynomialSubtraction) {
    // S_n - n p_n / 2 = n^2/2 [-1/2 + (S_1 - P_1)(LL)/L + (P_2 - S_2)(LL)/L^2]
    const auto& p1 = cipolla_poly(1);
    const auto& s1 = sum_poly(1);
    const auto& p2 = cipolla_poly(2);
    const auto& s2 = sum_poly(2);
    // 1/L term: half of (S_1 - P_1), which is constant
    EXPECT_EQ((s1.coefficient(0) - p1.coefficient(0)) / 2, rational(-1, 2));
    EXPECT_EQ(s1.coefficient(1) - p1.coefficient(1), rational(0));
    // 1/L^2 term: half of (P_2 - S_2) = LL/4 + c
    EXPECT_EQ((p2.coefficient(2) - s2.coefficient(2)) / 2, rational(0));
    EXPECT_EQ((p2.coefficient(1) - s2.coefficient(1)) / 2, rational(1, 4));
    EXPECT_EQ((p2.coefficient(0) - s2.coefficient(0)) / 2, lemma31_constant::derived().value);
    EXPECT_EQ(lemma31_constant::derived().value, rational(-5, 8));
    EXPECT_EQ(lemma31_constant::paper().value, rational(-49, 8));
    EXPECT_EQ(lemma31_constant::paper().value - lemma31_constant::derived().value, rational(-11, 2));
    EXPECT_EQ(lemma31_constant::from_name("paper").which, lemma31_constant::choice::paper);
    EXPECT_THROW(lemma31_constant::from_name("other"), domain_error);
}

TEST(CipollaP, OrderZeroIsDefinition) {
    for (std::uint64_t n = 3; n < 5000; n += 7) {
        const auto lp = log_pair<double>::of(n);
        EXPECT_NEAR(cipolla_p<double>(n, expansion_order(0)) / static_cast<double>(n) - (lp.L + lp.LL - 1), 0.0,
                    1e-13);
    }
}

TEST(CipollaP, MillionthPrime) {
    const double approx = cipolla_p<double>(1'000'000, expansion_order(2));
    EXPECT_LT(std::abs(approx - 15'485'863.0) / 15'485'863.0, 5e-4);
}

TEST(CipollaP, OrderDifferences) {
    const std::uint64_t n = 1'000'000;
    const auto lp = log_pair<double>::of(n);
    const double nn = static_cast<double>(n);
    const double d21 = cipolla_p<double>(n, expansion_order(2)) - cipolla_p<double>(n, expansion_order(1));
    const double expected21 = -nn * cipolla_poly(2).eval(lp.LL) / (lp.L * lp.L);
    EXPECT_NEAR(d21, expected21, 1e-8 * std::abs(cipolla_p<double>(n, expansion_order(2))));
    const double d10 = cipolla_p<double>(n, expansion_order(1)) - cipolla_p<double>(n, expansion_order(0));
    EXPECT_NEAR(d10, nn * (lp.LL - 2) / lp.L, 1e-8 * nn * lp.L);
}

TEST(CipollaP, Domain) { EXPECT_THROW(cipolla_p<double>(2, expansion_order(1)), domain_error); }

TEST(SumExpansion, OrderZeroIsDusartForm) {
    for (std::uint64_t n : {3ull, 17ull, 1000ull, 1'000'000ull}) {
        const auto lp = log_pair<double>::of(n);
        const double nn = static_cast<double>(n);
        EXPECT_NEAR(sum_expansion<double>(n, expansion_order(0)), nn * nn / 2 * (lp.L + lp.LL - 1.5),
                    1e-14 * nn * nn * lp.L);
    }
}

TEST(SumExpansion, OrderDifference) {
    for (std::uint64_t n : {100ull, 1'000'000ull}) {
        const auto lp = log_pair<double>::of(n);
        const double nn = static_cast<double>(n);
        const double d = sum_expansion<double>(n, expansion_order(1)) - sum_expansion<double>(n, expansion_order(0));
        EXPECT_NEAR(d, nn * nn / 2 * sum_poly(1).eval(lp.LL) / lp.L, 1e-12 * nn * nn * lp.L);
        EXPECT_NEAR(d, nn * nn / 2 * (lp.LL - 3) / lp.L, 1e-12 * nn * nn * lp.L);
    }
}

TEST(SumExpansion, AccuracyAtOneMillion) {
    const auto& s = testing_support::store_1e6();
    const double exact = 7'472'966'967'499.0;
    ASSERT_EQ(s.prefix_sum(1'000'000), static_cast<uint128>(7'472'966'967'499ull));
    // Reference relative errors from an independent numpy evaluation. Adding the order-1 and
    // order-2 corrections moves the value away from the exact sum at this n.
    const double expected[] = {3.0988110732040806e-4, 2.122152227718547e-3, 2.4751924891312544e-3};
    for (int m = 0; m <= 2; ++m) {
        const double rel = std::abs(exact - sum_expansion<double>(1'000'000, expansion_order(m))) / exact;
        EXPECT_NEAR(rel, expected[m], 1e-12) << "m=" << m;
    }
}

TEST(SumExpansion, IncreasingInN) {
    for (int m = 0; m <= 2; ++m) {
        double prev = sum_expansion<double>(10, expansion_order(m));
        for (std::uint64_t n = 11; n < 100'000; n = n + 1 + n / 10) {
            const double v = sum_expansion<double>(n, expansion_order(m));
            ASSERT_GT(v, prev) << "m=" << m << " n=" << n;
            prev = v;
        }
    }
}

TEST(SumExpansion, Domain) { EXPECT_THROW(sum_expansion<double>(1, expansion_order(0)), domain_error); }

TEST(MandlRhsRefined, HighPrecisionReference) {
    // 40-digit mpmath evaluation with p_{10^5} = 1299709
    const double v = mandl_rhs_refined<double>(100'000, 1'299'709);
    EXPECT_NEAR(v / 62097242227.1727469616777563778, 1.0, 1e-10);
    const auto hp = mandl_rhs_refined<high_precision>(100'000, 1'299'709);
    const high_precision ref("62097242227.1727469616777563778");
    EXPECT_LT(abs(hp - ref), high_precision("1e-18"));
}

TEST(MandlRhsRefined, AtIndex835) {
    // p_835 = 6421, S_835 = 2497896; mpmath value of the bound is 2461983.1391043885...
    const double v = mandl_rhs_refined<double>(835, 6421);
    EXPECT_NEAR(v, 2461983.139104388540240426, 1e-6);
    // the bound lies below the actual sum here
    EXPECT_LT(v, 2497896.0);
}

TEST(MandlRhsRefined, BelowHalfNPn) {
    const auto& s = testing_support::store_1e6();
    for (std::uint64_t n = 3; n <= s.count(); n = n * 11 / 10 + 1) {
        const double half = static_cast<double>(n) * static_cast<double>(s.nth_prime(n)) / 2;
        ASSERT_LT(mandl_rhs_refined<double>(n, s.nth_prime(n)), half) << "n=" << n;
    }
    EXPECT_THROW(mandl_rhs_refined<double>(2, 3), domain_error);
}

TEST(Lemma31Prediction, ConstantChoices) {
    for (std::uint64_t n : {3ull, 1000ull, 1'000'000ull}) {
        const std::uint64_t p = testing_support::store_1e6().nth_prime(n);
        const auto lp = log_pair<double>::of(n);
        const double n2L2 = static_cast<double>(n) * static_cast<double>(n) / (lp.L * lp.L);
        const double base = mandl_rhs_refined<double>(n, p);
        const double paper = lemma31_prediction<double>(n, p, lemma31_constant::paper());
        const double derived = lemma31_prediction<double>(n, p, lemma31_constant::derived());
        const double tol = 1e-12 * std::abs(base) + 1e-9;
        EXPECT_NEAR(paper, base - 49 * n2L2 / 8, tol);
        EXPECT_NEAR(derived, base - 5 * n2L2 / 8, tol);
        EXPECT_NEAR(derived - paper, 11 * n2L2 / 2, tol);
    }
}

TEST(RobinGap, Coefficient) {
    EXPECT_NEAR(robin_gap_coefficient<double>(), 0.0965735903, 1e-10);
    EXPECT_NEAR(robin_gap_prediction<double>(1000), 96573.59028, 1e-4);
    EXPECT_THROW(robin_gap_prediction<double>(3), domain_error);
    const auto hp = robin_gap_coefficient<high_precision>();
    EXPECT_LT(abs(hp - high_precision("0.09657359027997265470861606072908828403775")), high_precision("1e-40"));
}
