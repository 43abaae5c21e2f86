#include "irrcert/primes.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

#include <thread>

using namespace irrcert;

TEST(NthPrime, MatchesTrialDivision)
{
    auto ref = oracle::trial_division_primes(10'000);
    PrimeCache cache;
    for (std::size_t i = 0; i < ref.size(); ++i) ASSERT_EQ(cache.nth(i + 1), ref[i]) << i + 1;
    EXPECT_TRUE(cache.verify());
    EXPECT_EQ(nth_prime(1), 2);
    EXPECT_EQ(nth_prime(4), 7);
    EXPECT_EQ(nth_prime(1000), 7919);
    EXPECT_EQ(nth_prime0(0), 2);
    EXPECT_EQ(nth_prime0(999), 7919);
    EXPECT_THROW(nth_prime(0), domain_error);
    PrimeCache capped(1 << 16, 100);
    EXPECT_THROW(capped.nth(101), resource_error);
}

TEST(NthPrime, SegmentSizeIndependent)
{
    PrimeCache small(64), big(1 << 20);
    for (std::uint64_t n : {1ULL, 2ULL, 17ULL, 1000ULL, 25'000ULL, 3ULL, 50'000ULL})
        EXPECT_EQ(small.nth(n), big.nth(n)) << n;
    EXPECT_TRUE(small.verify());
}

TEST(NthPrime, ConcurrentReaders)
{
    PrimeCache cache(1 << 12);
    std::vector<std::uint64_t> got(8);
    std::vector<std::thread> pool;
    for (int t = 0; t < 8; ++t)
        pool.emplace_back([&, t] { got[static_cast<std::size_t>(t)] = cache.nth(5000 + 1000 * t); });
    for (auto& th : pool) th.join();
    PrimeCache serial;
    for (int t = 0; t < 8; ++t) EXPECT_EQ(got[static_cast<std::size_t>(t)], serial.nth(5000 + 1000 * t));
}

TEST(NthPrime, Bertrand)
{
    PrimeCache cache;
    cache.nth(20'000);
    for (std::uint64_t n = 1; n < cache.materialized(); ++n) ASSERT_LT(cache.nth(n + 1), 2 * cache.nth(n)) << n;
}

TEST(RatioWindow, Examples)
{
    auto s = prime_ratio_window(1, 4);
    EXPECT_EQ(s.max_ratio, make_rat(5, 3));
    EXPECT_EQ(s.argmax, 2);
    auto w = prime_ratio_window(10'000, 20'000);
    EXPECT_LE(w.max_ratio, make_rat(105, 100));
    EXPECT_GT(w.min_ratio, 1);
    EXPECT_TRUE(prime_ratio_window(7, 7).empty);
}

TEST(DoubleSqrt, MatchesMpfrOracle)
{
    auto ref = oracle::trial_division_primes(20'000);
    auto oracle_order = [&](long N, const mpq_class& eps) {
        mpq_class diff(static_cast<long>(ref[static_cast<std::size_t>(2 * N - 1)] - ref[static_cast<std::size_t>(N - 1)]));
        oracle::Interval root = oracle::sqrt(mpq_class(static_cast<long>(ref[static_cast<std::size_t>(N - 1)])));
        mpq_class lhs_lo = diff / root.hi(), lhs_hi = diff / root.lo();
        oracle::Interval rhs = oracle::pow(mpq_class(N), mpq_class(1, 2) + eps);
        if (lhs_hi < rhs.lo()) return Order::Less;
        if (lhs_lo > rhs.hi()) return Order::Greater;
        return Order::Overlap;
    };
    struct Case {
        long N;
        BigRat eps;
    };
    for (const Case& c : {Case{1000, make_rat(1, 10)}, Case{10'000, make_rat(1, 2)}, Case{1, make_rat(1, 2)},
                          Case{10'000, make_rat(1, 10)}, Case{5000, make_rat(1, 4)}}) {
        auto r = double_sqrt_check(c.N, c.eps);
        EXPECT_EQ(r.order, oracle_order(c.N, c.eps)) << c.N;
        EXPECT_FALSE(r.verdict.assumed.empty());
    }
    // (17389 - 7919) / sqrt(7919) = 106.4... exceeds 1000^0.6 = 63.09...
    auto n1000 = double_sqrt_check(1000, make_rat(1, 10));
    EXPECT_EQ(n1000.p_n, 7919);
    EXPECT_EQ(n1000.p_2n, 17389);
    ASSERT_TRUE(n1000.verdict.is_refuted());
    EXPECT_TRUE(double_sqrt_check(10'000, make_rat(1, 2)).verdict.is_certified());
    // N = 1: (3 - 2) / sqrt(2) < 1.
    EXPECT_TRUE(double_sqrt_check(1, make_rat(1, 2)).verdict.is_certified());
}
