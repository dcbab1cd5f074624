#pragma once

/// @file cli.hpp
/// Command-line front end. `run` takes the full argument list (argv[0] included) and two streams,
/// so it can be driven in-process by tests as well as by the `primesum` executable.
///
/// Exit codes: 0 success, 1 a checked inequality failed where it is claimed to hold (or, for
/// `verify`, failed at the requested n), 2 usage error, 3 runtime failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "analysis.hpp"
#include "asymptotics.hpp"
#include "csv.hpp"
#include "inequalities.hpp"
#include "prime_engine.hpp"
#include "quadrature.hpp"

namespace primesum::cli {

inline constexpr std::string_view version = "1.0.0";

namespace detail {

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct options {
    std::optional<std::uint64_t> n;
    std::optional<std::uint64_t> from;
    std::optional<std::uint64_t> to;
    std::string kind;
    int order = 2;
    std::uint64_t grid_min = 0;
    std::uint64_t grid_max = 0;
    std::uint64_t points = 0;
    std::string coefficient = "derived";
    double tol = 1e-10;
    std::string out_path;
    std::string cache_path;
    std::uint64_t max_primes = sieve_config{}.max_primes;
    unsigned threads = 1;
    bool progress = false;
    bool meta = false;
    bool violations_only = false;
    std::string target;
    std::string term;
};

class context {
public:
    context(const options& opt, std::ostream& out, std::ostream& err, std::string command)
        : opt_(opt), err_(err), command_(std::move(command)) {
        if (!opt_.out_path.empty()) {
            file_ = std::make_unique<std::ofstream>(opt_.out_path, std::ios::binary | std::ios::trunc);
            if (!*file_) throw usage_error("cannot open --out file: " + opt_.out_path);
            out_ = file_.get();
        } else {
            out_ = &out;
        }
    }

    std::ostream& out() { return *out_; }
    std::ostream& err() { return err_; }

    void progress(const std::string& msg) {
        if (opt_.progress) err_ << "[primesum] " << msg << '\n';
    }

    /// Store with at least `needed` primes, from the cache when it is large enough.
    const prime_store& store(std::uint64_t needed) {
        if (store_ && store_->count() >= needed) return *store_;
        if (needed > opt_.max_primes)
            throw resource_exhausted("need " + std::to_string(needed) + " primes but --max-primes is " +
                                     std::to_string(opt_.max_primes));
        if (!opt_.cache_path.empty() && std::filesystem::exists(opt_.cache_path)) {
            progress("loading cache " + opt_.cache_path);
            auto cached = load_store(opt_.cache_path, opt_.max_primes);
            if (cached.count() >= needed) {
                store_.emplace(std::move(cached));
                source_ = "cache " + opt_.cache_path;
                return *store_;
            }
            progress("cache holds " + std::to_string(cached.count()) + " primes, rebuilding");
        }
        sieve_config cfg;
        cfg.n_target = needed;
        cfg.max_primes = opt_.max_primes;
        cfg.threads = opt_.threads;
        progress("sieving the first " + std::to_string(needed) + " primes");
        store_.emplace(build_store<std::uint64_t>(cfg));
        source_ = "sieve";
        if (!opt_.cache_path.empty()) {
            progress("writing cache " + opt_.cache_path);
            save_store(*store_, opt_.cache_path);
        }
        return *store_;
    }

    /// Optional commented provenance header followed by the CSV header row.
    void header(std::string_view columns) {
        if (opt_.meta) {
            out() << "# primesum " << version << '\n' << "# command: " << command_ << '\n';
            if (store_) out() << "# store: " << store_->count() << " primes from " << source_ << '\n';
        }
        out() << columns << '\n';
    }

private:
    const options& opt_;
    std::ostream* out_ = nullptr;
    std::ostream& err_;
    std::unique_ptr<std::ofstream> file_;
    std::optional<prime_store> store_;
    std::string source_;
    std::string command_;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw usage_error(msg);
}

/// [from, to] from --n or --from/--to.
inline std::pair<std::uint64_t, std::uint64_t> index_range(const options& o, std::uint64_t default_from = 1) {
    if (o.n) {
        require(!o.from && !o.to, "--n cannot be combined with --from/--to");
        require(*o.n >= 1, "--n must be >= 1");
        return {*o.n, *o.n};
    }
    require(o.to.has_value(), "either --n or --to is required");
    const std::uint64_t lo = o.from.value_or(default_from);
    require(lo >= 1 && lo <= *o.to, "need 1 <= --from <= --to");
    return {lo, *o.to};
}

inline grid_spec grid_from(const options& o, grid_spec fallback) {
    grid_spec g = fallback;
    if (o.grid_min) g.n_min = o.grid_min;
    if (o.grid_max) g.n_max = o.grid_max;
    if (o.points) g.points = o.points;
    try {
        g.validate();
    } catch (const domain_error& e) {
        throw usage_error(e.what());
    }
    return g;
}

inline int cmd_primes(const options& o, context& ctx) {
    const auto [lo, hi] = index_range(o);
    const auto& store = ctx.store(hi);
    ctx.header("n,p_n");
    for (const auto t : store.stream_triples(lo, hi)) csv::row(ctx.out(), t.n, t.p);
    return 0;
}

inline int cmd_sum(const options& o, context& ctx) {
    const auto [lo, hi] = index_range(o);
    const auto& store = ctx.store(hi);
    ctx.header("n,p_n,S_n");
    for (const auto t : store.stream_triples(lo, hi)) csv::row(ctx.out(), t.n, t.p, csv::integer(t.sum));
    return 0;
}

inline int cmd_approx(const options& o, context& ctx) {
    const auto [lo, hi] = index_range(o);
    require(lo >= 3, "approx needs n >= 3");
    const expansion_order order(o.order);
    const auto c = lemma31_constant::from_name(o.coefficient);
    const auto& store = ctx.store(hi);
    ctx.header("n,order,p_n,cipolla_p,S_n,sum_expansion,mandl_rhs_refined,lemma31_prediction");
    for (const auto t : store.stream_triples(lo, hi))
        csv::row(ctx.out(), t.n, order.value(), t.p, csv::real(cipolla_p<double>(t.n, order)), csv::integer(t.sum),
                 csv::real(sum_expansion<double>(t.n, order)), csv::real(mandl_rhs_refined<double>(t.n, t.p)),
                 csv::real(lemma31_prediction<double>(t.n, t.p, c)));
    return 0;
}

inline int cmd_verify(const options& o, context& ctx) {
    require(o.n.has_value(), "verify needs --n");
    const auto kind = inequality_kind_from_name(o.kind);
    require(*o.n >= min_index(kind), std::string(name(kind)) + " needs --n >= " + std::to_string(min_index(kind)));
    const auto& store = ctx.store(*o.n);
    const auto rec = check(kind, *o.n, store);
    ctx.header("n,kind,holds,margin,guarded");
    csv::row(ctx.out(), rec.n, name(kind), csv::boolean(rec.holds), csv::margin(rec.margin), csv::boolean(rec.guarded));
    if (!rec.holds) ctx.err() << name(kind) << " violated at n = " << rec.n << '\n';
    return rec.holds ? 0 : 1;
}

inline int cmd_scan(const options& o, context& ctx) {
    const auto kind = inequality_kind_from_name(o.kind);
    require(o.to.has_value(), "scan needs --to");
    const std::uint64_t lo = o.from.value_or(min_index(kind));
    require(lo <= *o.to, "need --from <= --to");
    require(kind != inequality_kind::robin || lo >= 4, "robin scan needs --from >= 4");
    const auto& store = ctx.store(*o.to);
    ctx.header("n,holds,margin");
    const auto report = scan(kind, lo, *o.to, store, [&](const verification_record& r) {
        if (!o.violations_only || !r.holds) csv::row(ctx.out(), r.n, csv::boolean(r.holds), csv::margin(r.margin));
    });
    auto& err = ctx.err();
    err << "kind=" << name(kind) << " range=[" << report.n_lo << "," << report.n_hi
        << "] violations=" << report.violations.size();
    if (report.largest_violation) err << " largest_violation=" << *report.largest_violation;
    err << " threshold=" << report.threshold;
    if (report.threshold > report.n_hi) err << " (fails at the end of the range)";
    if (kind == inequality_kind::mandl_refined) err << " guarded=" << report.guarded << " flipped=" << report.flipped;
    err << '\n';
    const auto claim = claimed_from(kind);
    const bool clean = !claim || !report.largest_violation || *report.largest_violation < *claim;
    if (!clean) err << "violation inside the range n >= " << *claim << " where " << name(kind) << " is claimed\n";
    return clean ? 0 : 1;
}

inline int cmd_residuals(const options& o, context& ctx) {
    require(!o.target.empty(), "residuals needs --target");
    const auto target = residual_target_from_name(o.target);
    const auto grid = grid_from(o, grid_spec{});
    const auto& store = ctx.store(grid.n_max);
    const auto rows = residual_table(target, grid, store);
    ctx.header("n,exact,approx,abs_err,scaled_err");
    for (const auto& r : rows)
        csv::row(ctx.out(), r.n, csv::integer(r.exact), csv::real(r.approx), csv::real(r.abs_err),
                 csv::real(r.scaled_err));
    try {
        const auto t = trend_verdict(rows);
        ctx.err() << "target=" << name(target) << " trend=" << name(t.verdict) << " slope=" << csv::real(t.slope)
                  << '\n';
    } catch (const degenerate_input& e) {
        ctx.err() << "trend: " << e.what() << '\n';
    }
    return 0;
}

inline int cmd_lemma31(const options& o, context& ctx) {
    const auto c = lemma31_constant::from_name(o.coefficient);
    const auto grid = grid_from(o, grid_spec{});
    require(grid.n_min >= 10'000, "lemma31 needs --grid-min >= 10000");
    const auto& store = ctx.store(grid.n_max);
    const auto est = lemma31_constant_estimate(grid, store);
    ctx.header("n,c_hat,lemma31_prediction,scaled_err");
    for (const auto& p : est.points) {
        const double pred = lemma31_prediction<double>(p.n, store.nth_prime(p.n), c);
        const auto lp = log_pair<double>::of(p.n);
        const double scaled = (static_cast<double>(to_long_double(store.prefix_sum(p.n)) - pred)) /
                              error_scale(residual_target::lemma31_paper, lp);
        csv::row(ctx.out(), p.n, csv::real(p.c_hat), csv::real(pred), csv::real(scaled));
    }
    ctx.err() << "c_hat(" << est.points.back().n << ")=" << csv::real(est.points.back().c_hat)
              << " nearer=" << est.nearer.name() << " (" << (est.nearer.value.numerator() * 8 / est.nearer.value.denominator())
              << ")\n";
    return 0;
}

inline int cmd_quadcheck(const options& o, context& ctx) {
    const auto grid = grid_from(o, grid_spec{1000, 1'000'000, 4});
    require(o.tol > 0, "--tol must be positive");
    std::vector<integrand_term> terms;
    if (o.term.empty())
        terms.assign(all_integrand_terms.begin(), all_integrand_terms.end());
    else
        terms.push_back(integrand_term_from_name(o.term));
    const auto ns = grid.values();
    ctx.header("term,n,numeric,closed_form,scaled_residual");
    for (const auto t : terms) {
        ctx.progress("integrating " + std::string(name(t)));
        for (const auto& r : verify_term_expansion(t, ns, o.tol))
            csv::row(ctx.out(), name(t), r.n, csv::real(r.numeric), csv::real(r.closed_form),
                     csv::real(r.scaled_residual));
    }
    return 0;
}

inline int cmd_report(const options& o, context& ctx) {
    const std::uint64_t hi = o.to.value_or(1'000'000);
    require(hi >= 10'000, "report needs --to >= 10000");
    const auto& store = ctx.store(hi);
    ctx.header("check,value,status");
    bool clean = true;
    for (const auto kind : all_inequality_kinds) {
        ctx.progress("scanning " + std::string(name(kind)));
        const auto r = scan(kind, min_index(kind), hi, store, o.threads);
        const auto claim = claimed_from(kind);
        const bool ok = !claim || !r.largest_violation || *r.largest_violation < *claim;
        clean = clean && ok;
        const std::string value = r.threshold > hi ? "none" : std::to_string(r.threshold);
        csv::row(ctx.out(), std::string(name(kind)) + "_threshold", value,
                 claim ? (ok ? "consistent" : "contradicts n>=" + std::to_string(*claim)) : "observed");
    }
    const std::uint64_t n = hi;
    const double exact = static_cast<double>(to_long_double(store.prefix_sum(n)));
    for (int m = 0; m <= 2; ++m) {
        const double rel = std::abs(exact - sum_expansion<double>(n, expansion_order(m))) / exact;
        csv::row(ctx.out(), "sum_rel_err_m" + std::to_string(m) + "@" + std::to_string(n), csv::real(rel), "observed");
    }
    const double c_hat = lemma31_c_hat(n, store);
    csv::row(ctx.out(), "lemma31_c_hat@" + std::to_string(n), csv::real(c_hat),
             std::abs(c_hat + 49) < std::abs(c_hat + 5) ? "nearer_paper" : "nearer_derived");
    return clean ? 0 : 1;
}

inline std::string join(const std::vector<std::string>& args) {
    std::string s;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (i > 1) s += ' ';
        s += args[i];
    }
    return s;
}

} // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using detail::options;
    options o;
    CLI::App app{"Exact prime sums, their asymptotic expansions and the Mandl/Hassani/Robin inequalities",
                 "primesum"};
    app.require_subcommand(1, 1);

    const std::vector<std::string> kinds = {"mandl", "hassani", "mandl-refined", "robin"};
    std::vector<std::string> targets, terms;
    for (auto t : all_residual_targets) targets.emplace_back(name(t));
    for (auto t : all_integrand_terms) terms.emplace_back(name(t));

    app.add_option("--out", o.out_path, "Write data to this file instead of stdout");
    app.add_option("--cache", o.cache_path, "Prime store cache file (PSUMv1)");
    app.add_option("--max-primes", o.max_primes, "Memory budget as a prime count")->check(CLI::PositiveNumber);
    app.add_option("--threads", o.threads, "Worker threads for sieving and scans")->check(CLI::Range(1u, 256u));
    app.add_flag("--progress", o.progress, "Progress messages on stderr");
    app.add_flag("--meta", o.meta, "Commented provenance header before the CSV");

    auto add_range = [&](CLI::App* sub) {
        sub->add_option("--n", o.n, "Single index");
        sub->add_option("--from", o.from, "First index");
        sub->add_option("--to", o.to, "Last index");
    };
    auto add_grid = [&](CLI::App* sub) {
        sub->add_option("--grid-min", o.grid_min, "Smallest grid point");
        sub->add_option("--grid-max", o.grid_max, "Largest grid point");
        sub->add_option("--points", o.points, "Number of geometric grid points");
    };

    auto* primes = app.add_subcommand("primes", "CSV of n,p_n");
    add_range(primes);
    auto* sum = app.add_subcommand("sum", "CSV of n,p_n,S_n with exact prefix sums");
    add_range(sum);
    auto* approx = app.add_subcommand("approx", "Asymptotic formulas next to exact values");
    add_range(approx);
    approx->add_option("--order", o.order, "Expansion order")->check(CLI::Range(0, 2));
    approx->add_option("--coefficient", o.coefficient, "n^2/L^2 coefficient for the lemma 3.1 form")
        ->check(CLI::IsMember({"paper", "derived"}));
    auto* verify = app.add_subcommand("verify", "Check one inequality at one n");
    verify->add_option("--kind", o.kind)->required()->check(CLI::IsMember(kinds));
    verify->add_option("--n", o.n)->required();
    auto* scan_cmd = app.add_subcommand("scan", "Check an inequality over a range and report its threshold");
    scan_cmd->add_option("--kind", o.kind)->required()->check(CLI::IsMember(kinds));
    scan_cmd->add_option("--from", o.from);
    scan_cmd->add_option("--to", o.to)->required();
    scan_cmd->add_flag("--violations-only", o.violations_only, "Emit only failing rows");
    auto* residuals = app.add_subcommand("residuals", "Scaled residuals of an asymptotic formula on a grid");
    residuals->add_option("--target", o.target)->required()->check(CLI::IsMember(targets));
    add_grid(residuals);
    auto* lemma31 = app.add_subcommand("lemma31", "Empirical n^2/L^2 coefficient of S_n - n p_n/2");
    add_grid(lemma31);
    lemma31->add_option("--coefficient", o.coefficient)->check(CLI::IsMember({"paper", "derived"}));
    auto* quadcheck = app.add_subcommand("quadcheck", "Quadrature check of the term-by-term integral expansions");
    add_grid(quadcheck);
    quadcheck->add_option("--tol", o.tol, "Relative quadrature tolerance");
    quadcheck->add_option("--term", o.term)->check(CLI::IsMember(terms));
    auto* report = app.add_subcommand("report", "Summary of thresholds and expansion accuracy");
    report->add_option("--to", o.to, "Largest n (default 1000000)");

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    std::vector<char*> argv;
    for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }

    try {
        detail::context ctx(o, out, err, detail::join(args));
        const auto* sub = app.get_subcommands().front();
        const auto& which = sub->get_name();
        int code = 0;
        if (which == "primes") code = detail::cmd_primes(o, ctx);
        else if (which == "sum") code = detail::cmd_sum(o, ctx);
        else if (which == "approx") code = detail::cmd_approx(o, ctx);
        else if (which == "verify") code = detail::cmd_verify(o, ctx);
        else if (which == "scan") code = detail::cmd_scan(o, ctx);
        else if (which == "residuals") code = detail::cmd_residuals(o, ctx);
        else if (which == "lemma31") code = detail::cmd_lemma31(o, ctx);
        else if (which == "quadcheck") code = detail::cmd_quadcheck(o, ctx);
        else if (which == "report") code = detail::cmd_report(o, ctx);
        ctx.out().flush();
        return code;
    } catch (const detail::usage_error& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const domain_error& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
}

} // namespace primesum::cli
