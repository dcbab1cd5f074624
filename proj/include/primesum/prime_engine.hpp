#pragma once

/// @file prime_engine.hpp
/// Segmented sieve of Eratosthenes producing an immutable table of the first N primes
/// together with their exact prefix sums, plus a small binary cache format for that table.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <ranges>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "int128.hpp"

namespace primesum {

struct sieve_config {
    std::uint64_t n_target = 1;
    /// Integers covered by one sieving window. The default keeps the odd-only byte map at 256 KiB.
    std::uint64_t segment_size = std::uint64_t{1} << 19;
    /// Multiplier applied to the n(ln n + ln ln n) estimate of p_n.
    double bound_slack = 1.0;
    /// Memory budget, expressed as the largest prime count we agree to build.
    std::uint64_t max_primes = 200'000'000;
    unsigned threads = 1;

    void validate() const {
        if (n_target < 1) throw domain_error("sieve_config: n_target must be >= 1");
        if (segment_size < 2) throw domain_error("sieve_config: segment_size must be >= 2");
        if (!(bound_slack >= 1.0)) throw domain_error("sieve_config: bound_slack must be >= 1");
        if (threads < 1) throw domain_error("sieve_config: threads must be >= 1");
        if (n_target > max_primes)
            throw resource_exhausted("sieve_config: n_target " + std::to_string(n_target) +
                                     " exceeds the memory budget of " + std::to_string(max_primes) + " primes");
    }
};

template <std::unsigned_integral Prime>
struct prime_triple {
    std::uint64_t n;
    Prime p;
    uint128 sum;

    friend bool operator==(const prime_triple&, const prime_triple&) = default;
};

/// First `count()` primes, 1-indexed, with exact prefix sums S_n = p_1 + ... + p_n.
/// Immutable once constructed; every query is a read, so instances can be shared across threads.
template <std::unsigned_integral Prime = std::uint64_t>
class basic_prime_store {
public:
    using prime_type = Prime;
    using triple = prime_triple<Prime>;

    // 2^64 primes of at most 2^64 each cannot overflow a 128-bit accumulator.
    static_assert(sizeof(Prime) <= 8, "prefix sums are held in 128 bits");

    explicit basic_prime_store(std::vector<Prime> primes) : primes_(std::move(primes)) {
        if (primes_.size() < 1 || primes_[0] != 2)
            throw domain_error("prime store must start with 2");
        sums_.resize(primes_.size());
        uint128 acc = 0;
        for (std::size_t i = 0; i < primes_.size(); ++i) {
            if (i > 0 && primes_[i] <= primes_[i - 1])
                throw domain_error("prime store: primes must be strictly increasing");
            acc += primes_[i];
            sums_[i] = acc;
        }
    }

    std::uint64_t count() const noexcept { return primes_.size(); }

    Prime nth_prime(std::uint64_t n) const {
        check_index(n);
        return primes_[n - 1];
    }

    uint128 prefix_sum(std::uint64_t n) const {
        check_index(n);
        return sums_[n - 1];
    }

    /// Lazy view of (n, p_n, S_n) for n in [n_lo, n_hi], ascending.
    auto stream_triples(std::uint64_t n_lo, std::uint64_t n_hi) const {
        if (n_lo < 1 || n_lo > n_hi || n_hi > count())
            throw out_of_range("stream_triples: need 1 <= n_lo <= n_hi <= " + std::to_string(count()) +
                               ", got [" + std::to_string(n_lo) + ", " + std::to_string(n_hi) + "]");
        return std::views::iota(n_lo, n_hi + 1) | std::views::transform([this](std::uint64_t n) {
                   return triple{n, primes_[n - 1], sums_[n - 1]};
               });
    }

    std::span<const Prime> primes() const noexcept { return primes_; }

private:
    void check_index(std::uint64_t n) const {
        if (n < 1 || n > count())
            throw out_of_range("prime index " + std::to_string(n) + " outside [1, " + std::to_string(count()) + "]");
    }

    std::vector<Prime> primes_;
    std::vector<uint128> sums_;
};

using prime_store = basic_prime_store<>;

namespace detail {

inline std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

/// Odd primes up to and including `limit`, by a plain sieve. Used as the base set for the segments.
inline std::vector<std::uint32_t> small_odd_primes(std::uint64_t limit) {
    std::vector<std::uint32_t> out;
    if (limit < 3) return out;
    std::vector<bool> composite(limit + 1, false);
    for (std::uint64_t i = 3; i * i <= limit; i += 2)
        if (!composite[i])
            for (std::uint64_t j = i * i; j <= limit; j += 2 * i) composite[j] = true;
    for (std::uint64_t i = 3; i <= limit; i += 2)
        if (!composite[i]) out.push_back(static_cast<std::uint32_t>(i));
    return out;
}

/// Appends the odd primes in [lo, hi) to `out`. `base` must contain every odd prime <= sqrt(hi - 1).
template <typename Prime>
void sieve_range(std::uint64_t lo, std::uint64_t hi, std::uint64_t segment_size,
                 std::span<const std::uint32_t> base, std::vector<Prime>& out) {
    std::vector<std::uint8_t> odd_composite;
    for (std::uint64_t seg_lo = lo; seg_lo < hi; seg_lo += segment_size) {
        const std::uint64_t seg_hi = std::min(hi, seg_lo + segment_size);
        // slot i represents the odd number first_odd + 2i
        const std::uint64_t first_odd = seg_lo | 1;
        if (first_odd >= seg_hi) continue;
        const std::uint64_t slots = (seg_hi - first_odd + 1) / 2;
        odd_composite.assign(slots, 0);
        for (const std::uint64_t p : base) {
            const std::uint64_t pp = p * p;
            if (pp >= seg_hi) break;
            std::uint64_t start = std::max(pp, (first_odd + p - 1) / p * p);
            if ((start & 1) == 0) start += p;
            for (std::uint64_t m = (start - first_odd) / 2; m < slots; m += p) odd_composite[m] = 1;
        }
        for (std::uint64_t i = 0; i < slots; ++i) {
            const std::uint64_t v = first_odd + 2 * i;
            if (!odd_composite[i] && v > 1) out.push_back(static_cast<Prime>(v));
        }
    }
}

/// Odd primes in [lo, hi), splitting the range into `threads` contiguous chunks merged in order.
template <typename Prime>
std::vector<Prime> sieve_chunked(std::uint64_t lo, std::uint64_t hi, std::uint64_t segment_size, unsigned threads) {
    const auto base = small_odd_primes(isqrt(hi));
    if (threads <= 1 || hi - lo < 2 * segment_size) {
        std::vector<Prime> out;
        sieve_range(lo, hi, segment_size, std::span<const std::uint32_t>(base), out);
        return out;
    }
    const std::uint64_t span_len = hi - lo;
    std::uint64_t chunk = (span_len + threads - 1) / threads;
    chunk = (chunk + segment_size - 1) / segment_size * segment_size;
    std::vector<std::vector<Prime>> parts(threads);
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t) {
        const std::uint64_t a = lo + t * chunk;
        if (a >= hi) break;
        const std::uint64_t b = std::min(hi, a + chunk);
        workers.emplace_back([&, a, b, t] {
            sieve_range(a, b, segment_size, std::span<const std::uint32_t>(base), parts[t]);
        });
    }
    workers.clear();
    std::vector<Prime> out;
    std::size_t total = 0;
    for (const auto& p : parts) total += p.size();
    out.reserve(total);
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

/// The classical over-estimate of p_n used to size the first sieving pass.
inline std::uint64_t sieve_limit_estimate(std::uint64_t n, double slack) {
    if (n < 6) return 15;
    const double ln = std::log(static_cast<double>(n));
    return static_cast<std::uint64_t>(std::ceil(static_cast<double>(n) * (ln + std::log(ln)) * slack)) + 1;
}

/// First n_target primes. Sieves up to `initial_limit` and keeps extending by 25% until enough are found.
template <typename Prime>
std::vector<Prime> first_primes(std::uint64_t n_target, std::uint64_t initial_limit, std::uint64_t segment_size,
                                unsigned threads) {
    std::vector<Prime> primes;
    primes.reserve(n_target);
    primes.push_back(2);
    std::uint64_t done = 3;  // odd numbers below `done` are already sieved
    std::uint64_t limit = std::max<std::uint64_t>(initial_limit, 3);
    while (primes.size() < n_target) {
        if (limit > std::numeric_limits<Prime>::max())
            throw resource_exhausted("prime store: primes exceed the range of the storage type");
        auto more = sieve_chunked<Prime>(done, limit + 1, segment_size, threads);
        primes.insert(primes.end(), more.begin(), more.end());
        done = limit + 1;
        limit += std::max<std::uint64_t>(limit / 4, 16);
    }
    primes.resize(n_target);
    return primes;
}

} // namespace detail

/// Builds a store holding exactly config.n_target primes.
template <std::unsigned_integral Prime = std::uint64_t>
basic_prime_store<Prime> build_store(const sieve_config& config) {
    config.validate();
    const auto limit = detail::sieve_limit_estimate(config.n_target, config.bound_slack);
    return basic_prime_store<Prime>(
        detail::first_primes<Prime>(config.n_target, limit, config.segment_size, config.threads));
}

inline prime_store build_store(std::uint64_t n_target) {
    sieve_config cfg;
    cfg.n_target = n_target;
    return build_store<>(cfg);
}

// Cache layout, all little-endian:
//   "PSUMv1" | u64 count | count x u64 primes | u128 S_count

inline constexpr char cache_magic[6] = {'P', 'S', 'U', 'M', 'v', '1'};

template <std::unsigned_integral Prime>
void save_store(const basic_prime_store<Prime>& store, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw format_error("cannot open cache file for writing: " + path);
    auto put_u64 = [&os](std::uint64_t v) {
        unsigned char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
        os.write(reinterpret_cast<const char*>(b), 8);
    };
    os.write(cache_magic, sizeof cache_magic);
    put_u64(store.count());
    for (const Prime p : store.primes()) put_u64(p);
    const auto checksum = to_le_bytes(store.prefix_sum(store.count()));
    os.write(reinterpret_cast<const char*>(checksum.data()), checksum.size());
    if (!os) throw format_error("failed writing cache file: " + path);
}

/// Reads a cache file, recomputes the prefix sums and checks them against the stored final sum.
inline prime_store load_store(const std::string& path, std::uint64_t max_primes = sieve_config{}.max_primes) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw format_error("cannot open cache file: " + path);
    char magic[sizeof cache_magic];
    if (!is.read(magic, sizeof magic) || std::memcmp(magic, cache_magic, sizeof magic) != 0)
        throw format_error("bad cache magic in " + path);
    auto get_u64 = [&is, &path]() {
        unsigned char b[8];
        if (!is.read(reinterpret_cast<char*>(b), 8)) throw format_error("truncated cache file: " + path);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
        return v;
    };
    const std::uint64_t count = get_u64();
    if (count == 0) throw format_error("empty cache file: " + path);
    if (count > max_primes) throw resource_exhausted("cache holds more primes than the memory budget allows");
    std::vector<std::uint64_t> primes(count);
    for (auto& p : primes) p = get_u64();
    std::array<unsigned char, 16> tail{};
    if (!is.read(reinterpret_cast<char*>(tail.data()), tail.size()))
        throw format_error("truncated cache file (missing checksum): " + path);
    prime_store store = [&] {
        try {
            return prime_store(std::move(primes));
        } catch (const domain_error& e) {
            throw format_error(std::string("corrupt cache file: ") + e.what());
        }
    }();
    if (store.prefix_sum(store.count()) != from_le_bytes(tail))
        throw format_error("cache checksum mismatch in " + path);
    return store;
}

} // namespace primesum
