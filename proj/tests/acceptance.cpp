// Acceptance suite: one pass/fail line per criterion. With no argument every criterion runs;
// with a number only that criterion runs. Exit status is 0 only if every selected criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "primesum/primesum.hpp"

using namespace primesum;

namespace {

struct outcome {
    bool pass;
    std::string detail;
};

const prime_store& store_1e6() {
    static const prime_store s = build_store(1'000'000);
    return s;
}

const prime_store& store_1e7() {
    static const prime_store s = build_store(10'000'000);
    return s;
}

std::string list(const std::vector<std::uint64_t>& v, std::size_t max_items = 12) {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < v.size() && i < max_items; ++i) os << (i ? "," : "") << v[i];
    if (v.size() > max_items) os << ",... (" << v.size() << " total)";
    os << '}';
    return os.str();
}

outcome oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto expected = oracle::first_primes_trial(100'000);
    const auto s = build_store(100'000);
    std::uint64_t running = 0;
    std::uint64_t mismatches = 0;
    for (std::uint64_t n = 1; n <= expected.size(); ++n) {
        running += expected[n - 1];
        if (s.nth_prime(n) != expected[n - 1] || s.prefix_sum(n) != running) ++mismatches;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream os;
    os << "mismatches=" << mismatches << " over n<=100000, runtime=" << secs << "s (limit 60s)";
    return {mismatches == 0 && secs < 60, os.str()};
}

outcome mandl_threshold() {
    const auto r = scan(inequality_kind::mandl, 1, 1'000'000, store_1e6());
    const std::vector<std::uint64_t> expected = {1, 2, 3, 4, 5, 6, 8};
    return {r.violations == expected, "violations=" + list(r.violations) + " threshold=" + std::to_string(r.threshold)};
}

outcome hassani_threshold() {
    const auto r = scan(inequality_kind::hassani, 2, 1'000'000, store_1e6());
    return {r.largest_violation == 9u,
            "largest_violation=" + (r.largest_violation ? std::to_string(*r.largest_violation) : "none") +
                " threshold=" + std::to_string(r.threshold)};
}

outcome refined_mandl_threshold() {
    const auto r = scan(inequality_kind::mandl_refined, 2, 1'000'000, store_1e6());
    std::ostringstream os;
    os << "threshold=" << r.threshold << (r.threshold > r.n_hi ? " (bound fails at n_hi)" : "")
       << " violations=" << r.violations.size() << " largest_violation="
       << (r.largest_violation ? std::to_string(*r.largest_violation) : "none") << " guarded=" << r.guarded
       << " flipped=" << r.flipped << " (expected threshold 835)";
    return {r.threshold == 835 && r.flipped == 0, os.str()};
}

outcome robin_threshold() {
    const auto t5 = find_threshold(inequality_kind::robin, 100'000, store_1e6());
    const auto t6 = find_threshold(inequality_kind::robin, 1'000'000, store_1e6());
    return {t5 == t6, "threshold(1e5)=" + std::to_string(t5) + " threshold(1e6)=" + std::to_string(t6)};
}

outcome expansion_ordering() {
    const std::uint64_t n = 1'000'000;
    const double exact = static_cast<double>(to_long_double(store_1e6().prefix_sum(n)));
    double rel[3];
    for (int m = 0; m <= 2; ++m) rel[m] = std::abs(exact - sum_expansion<double>(n, expansion_order(m))) / exact;
    const bool monotone = rel[0] > rel[1] && rel[1] > rel[2];
    std::ostringstream os;
    os.precision(4);
    os << "rel_err m0=" << rel[0] << " m1=" << rel[1] << " m2=" << rel[2] << " (need m0>m1>m2 and m2<1e-3)";
    return {monotone && rel[2] < 1e-3, os.str()};
}

outcome residual_trend() {
    const auto rows = residual_table(residual_target::sum_m2, grid_spec{}, store_1e7());
    const auto t = trend_verdict(rows);
    std::ostringstream os;
    os << "verdict=" << name(t.verdict) << " slope=" << t.slope << " (need decreasing, slope < -0.05)";
    return {t.verdict == trend::decreasing && t.slope < -trend_slope_band, os.str()};
}

outcome lemma31_discrimination() {
    const auto at7 = lemma31_constant_estimate(grid_spec{10'000, 10'000'000, 13}, store_1e7());
    const auto at6 = lemma31_constant_estimate(grid_spec{10'000, 1'000'000, 9}, store_1e7());
    const double c = at7.points.back().c_hat;
    const bool in_band = c >= -10 && c <= 0;
    const bool stable = at6.nearer.which == at7.nearer.which;
    std::ostringstream os;
    os << "c_hat(1e7)=" << c << " c_hat(1e6)=" << at6.points.back().c_hat << " nearer(1e6)=" << at6.nearer.name()
       << " nearer(1e7)=" << at7.nearer.name() << " (need c_hat in [-10,0] and stable nearer)";
    return {in_band && stable, os.str()};
}

outcome quadrature_validation() {
    const std::uint64_t grid[] = {1000, 10'000, 100'000, 1'000'000};
    bool pass = true;
    std::ostringstream os;
    for (const auto term : all_integrand_terms) {
        const auto rows = verify_term_expansion(term, grid);
        double lo = INFINITY, hi = 0;
        for (const auto& r : rows) {
            const double a = std::abs(r.scaled_residual);
            if (!std::isfinite(a)) pass = false;
            lo = std::min(lo, a);
            hi = std::max(hi, a);
        }
        const double spread = lo > 0 ? hi / lo : INFINITY;
        pass = pass && spread < 10;
        os << name(term) << ":" << spread << ' ';
    }
    os << "(max/min spread, need < 10)";
    return {pass, os.str()};
}

outcome euler_sum_property() {
    bool pass = true;
    double worst = 0;
    for (const auto f : {monotone_fn::sqrt, monotone_fn::ln, monotone_fn::x_ln_x})
        for (const std::uint64_t n : {2ull, 10ull, 1000ull, 100'000ull}) {
            const double ratio = euler_sum_check(f, n).bound_ratio;
            worst = std::max(worst, ratio);
            pass = pass && ratio <= 1.0;
        }
    return {pass, "max ratio=" + std::to_string(worst) + " (need <= 1)"};
}

struct criterion {
    const char* title;
    std::function<outcome()> run;
};

} // namespace

int main(int argc, char** argv) {
    const std::vector<criterion> criteria = {
        {"exact engine oracle equivalence", oracle_equivalence},
        {"Mandl threshold", mandl_threshold},
        {"Hassani threshold", hassani_threshold},
        {"refined Mandl threshold", refined_mandl_threshold},
        {"Robin threshold stability", robin_threshold},
        {"expansion accuracy ordering", expansion_ordering},
        {"order-2 residual trend", residual_trend},
        {"lemma 3.1 constant discrimination", lemma31_discrimination},
        {"quadrature term validation", quadrature_validation},
        {"sum-vs-integral bound", euler_sum_property},
    };
    std::size_t first = 1, last = criteria.size();
    if (argc > 1) {
        const int k = std::atoi(argv[1]);
        if (k < 1 || static_cast<std::size_t>(k) > criteria.size()) {
            std::fprintf(stderr, "usage: acceptance [1-%zu]\n", criteria.size());
            return 2;
        }
        first = last = static_cast<std::size_t>(k);
    }
    bool all = true;
    for (std::size_t i = first; i <= last; ++i) {
        outcome o;
        try {
            o = criteria[i - 1].run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        all = all && o.pass;
        std::printf("[%s] C%zu %s: %s\n", o.pass ? "PASS" : "FAIL", i, criteria[i - 1].title, o.detail.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
