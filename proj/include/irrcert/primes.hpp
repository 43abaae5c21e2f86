#pragma once

// nth-prime generation by a segmented sieve of Eratosthenes, plus the
// prime-ratio and double-index gap diagnostics.

#include "irrcert/exact/elementary.hpp"
#include "irrcert/verdict.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

namespace irrcert {

/// Deterministic Miller-Rabin for 64-bit integers.
inline bool is_prime_u64(std::uint64_t n)
{
    if (n < 2) return false;
    for (std::uint64_t p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
        if (n % p == 0) return n == p;
    }
    using u128 = unsigned __int128;
    auto mulmod = [](std::uint64_t a, std::uint64_t b, std::uint64_t m) {
        return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
    };
    auto powmod = [&](std::uint64_t a, std::uint64_t e, std::uint64_t m) {
        std::uint64_t r = 1;
        for (a %= m; e; e >>= 1, a = mulmod(a, a, m))
            if (e & 1) r = mulmod(r, a, m);
        return r;
    };
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

/// Growable table of the first primes. Readers may run concurrently;
/// sieving a new segment takes the exclusive lock.
class PrimeCache {
public:
    explicit PrimeCache(std::uint64_t segment_size = std::uint64_t{1} << 18,
                        std::uint64_t max_index = 60'000'000)
        : segment_size_(std::max<std::uint64_t>(segment_size, 64)), max_index_(max_index)
    {
    }

    PrimeCache(const PrimeCache&) = delete;
    PrimeCache& operator=(const PrimeCache&) = delete;

    static PrimeCache& global()
    {
        static PrimeCache cache;
        return cache;
    }

    /// The n-th prime, 1-based: nth(1) = 2.
    std::uint64_t nth(std::uint64_t n)
    {
        if (n < 1) throw domain_error("nth_prime index must be >= 1");
        if (n > max_index_)
            throw resource_error("nth_prime(" + std::to_string(n) + ") exceeds the cache cap of " +
                                 std::to_string(max_index_));
        {
            std::shared_lock lock(mutex_);
            if (n <= primes_.size()) return primes_[n - 1];
        }
        std::unique_lock lock(mutex_);
        while (primes_.size() < n) extend();
        return primes_[n - 1];
    }

    /// 0-based accessor: nth0(0) = 2.
    std::uint64_t nth0(std::uint64_t i) { return nth(i + 1); }

    std::uint64_t materialized() const
    {
        std::shared_lock lock(mutex_);
        return primes_.size();
    }

    /// Re-checks every stored prime and strict monotonicity.
    bool verify() const
    {
        std::shared_lock lock(mutex_);
        for (std::size_t i = 0; i < primes_.size(); ++i) {
            if (!is_prime_u64(primes_[i])) return false;
            if (i > 0 && primes_[i] <= primes_[i - 1]) return false;
        }
        return true;
    }

    std::uint64_t segment_size() const { return segment_size_; }

private:
    // Sieves [next_, next_ + segment_size_) and appends its primes.
    void extend()
    {
        const std::uint64_t lo = next_;
        const std::uint64_t hi = lo + segment_size_;
        auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(hi))) + 1;
        while (root * root < hi) ++root;
        grow_base(root);
        std::vector<char> composite(segment_size_, 0);
        for (std::uint64_t p : base_) {
            if (p * p >= hi) break;
            std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
            for (std::uint64_t m = start; m < hi; m += p) composite[m - lo] = 1;
        }
        for (std::uint64_t v = std::max<std::uint64_t>(lo, 2); v < hi; ++v)
            if (!composite[v - lo]) primes_.push_back(v);
        next_ = hi;
    }

    // Base primes up to `limit` by a plain sieve.
    void grow_base(std::uint64_t limit)
    {
        if (limit <= base_limit_) return;
        limit = std::max(limit, 2 * base_limit_);
        std::vector<char> composite(limit + 1, 0);
        base_.clear();
        for (std::uint64_t i = 2; i <= limit; ++i) {
            if (composite[i]) continue;
            base_.push_back(i);
            for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
        }
        base_limit_ = limit;
    }

    std::uint64_t segment_size_;
    std::uint64_t max_index_;
    mutable std::shared_mutex mutex_;
    std::vector<std::uint64_t> primes_;
    std::vector<std::uint64_t> base_;
    std::uint64_t base_limit_ = 1;
    std::uint64_t next_ = 0;
};

inline BigInt nth_prime(std::int64_t n, PrimeCache& cache = PrimeCache::global())
{
    if (n < 1) throw domain_error("nth_prime index must be >= 1");
    return BigInt(static_cast<unsigned long>(cache.nth(static_cast<std::uint64_t>(n))));
}

/// 0-based accessor matching formalizations that index primes from 0.
inline BigInt nth_prime0(std::int64_t i, PrimeCache& cache = PrimeCache::global())
{
    if (i < 0) throw domain_error("nth_prime0 index must be >= 0");
    return nth_prime(i + 1, cache);
}

/// Extremes of p(n+1)/p(n) over consecutive pairs with nmin <= n < n+1 <= nmax.
struct PrimeRatioStats {
    std::int64_t nmin = 1, nmax = 1;
    bool empty = true;
    BigRat max_ratio, min_ratio;
    std::int64_t argmax = 0, argmin = 0;
};

inline PrimeRatioStats prime_ratio_window(std::int64_t nmin, std::int64_t nmax, PrimeCache& cache = PrimeCache::global())
{
    if (nmin < 1) throw domain_error("prime_ratio_window requires nmin >= 1");
    if (nmax < nmin) throw domain_error("prime_ratio_window requires nmin <= nmax");
    PrimeRatioStats s;
    s.nmin = nmin;
    s.nmax = nmax;
    cache.nth(static_cast<std::uint64_t>(nmax));
    for (std::int64_t n = nmin; n < nmax; ++n) {
        std::uint64_t p = cache.nth(static_cast<std::uint64_t>(n));
        std::uint64_t q = cache.nth(static_cast<std::uint64_t>(n) + 1);
        BigRat r = make_rat(BigInt(static_cast<unsigned long>(q)), BigInt(static_cast<unsigned long>(p)));
        if (s.empty || r > s.max_ratio) {
            s.max_ratio = r;
            s.argmax = n;
        }
        if (s.empty || r < s.min_ratio) {
            s.min_ratio = r;
            s.argmin = n;
        }
        s.empty = false;
    }
    return s;
}

/// (p(2N) - p(N)) / sqrt(p(N)) < N^(1/2 + eps), decided at one N.
struct DoubleSqrtReport {
    std::int64_t N = 1;
    BigRat epsilon;
    BigInt p_n, p_2n;
    RatBall lhs, rhs;
    Order order = Order::Overlap;
    Verdict verdict;
};

inline DoubleSqrtReport double_sqrt_check(std::int64_t N, const BigRat& epsilon, const Precision& prec = {},
                                          PrimeCache& cache = PrimeCache::global())
{
    if (N < 1) throw domain_error("double_sqrt_check requires N >= 1");
    if (epsilon <= 0) throw domain_error("double_sqrt_check requires epsilon > 0");
    DoubleSqrtReport r;
    r.N = N;
    r.epsilon = epsilon;
    r.p_n = nth_prime(N, cache);
    r.p_2n = nth_prime(2 * N, cache);
    r.lhs = RatBall(BigRat(r.p_2n - r.p_n)) / ball_sqrt(RatBall(r.p_n), prec);
    r.rhs = ball_powr(RatBall(BigInt(static_cast<long>(N))), RatBall(make_rat(1, 2) + epsilon), prec);
    r.order = cmp_certified(r.lhs, r.rhs);
    const AssumedFact beyond{"primes", "(p(2N) - p(N)) / sqrt(p(N)) < N^(1/2+eps) for all large N", Window(N, N)};
    switch (r.order) {
    case Order::Less: r.verdict = Verdict::certified("inequality holds at N"); break;
    case Order::Greater: r.verdict = Verdict::refuted_at(N, "inequality fails at N"); break;
    case Order::Overlap: r.verdict = Verdict::inconclusive("enclosures overlap at N"); break;
    }
    r.verdict.assume(beyond);
    return r;
}

} // namespace irrcert
