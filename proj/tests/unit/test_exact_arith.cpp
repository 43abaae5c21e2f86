#include "irrcert/exact/crossover.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace irrcert;

namespace {

bool overlaps(const RatBall& b, const oracle::Interval& o) { return b.lo() <= o.hi() && o.lo() <= b.hi(); }

BigRat random_rat(std::mt19937_64& rng, long lo_num, long hi_num, long den_max)
{
    std::uniform_int_distribution<long> num(lo_num, hi_num);
    std::uniform_int_distribution<long> den(1, den_max);
    return make_rat(num(rng), den(rng));
}

} // namespace

TEST(BigRat, Canonical)
{
    BigRat q = make_rat(BigInt(6), BigInt(-4));
    EXPECT_EQ(q.get_num(), -3);
    EXPECT_EQ(q.get_den(), 2);
    EXPECT_EQ(parse_rational("1e-3"), make_rat(1, 1000));
    EXPECT_EQ(parse_rational("-2.50"), make_rat(-5, 2));
    EXPECT_EQ(parse_rational("7/21"), make_rat(1, 3));
    EXPECT_THROW(parse_rational("x"), std::invalid_argument);
}

TEST(BigRat, Rounding)
{
    EXPECT_EQ(round_half_away(make_rat(1, 2)), 1);
    EXPECT_EQ(round_half_away(make_rat(-1, 2)), -1);
    EXPECT_EQ(round_half_away(make_rat(2, 3)), 1);
    EXPECT_EQ(floor_of(make_rat(-1, 3)), -1);
    EXPECT_EQ(ceil_of(make_rat(-1, 3)), 0);
    EXPECT_EQ(floor_log2(make_rat(1, 3)), -2);
    EXPECT_EQ(floor_log2(BigRat(8)), 3);
}

TEST(RatBall, ArithmeticContainsPointResults)
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        BigRat a = random_rat(rng, -50, 50, 17), b = random_rat(rng, -50, 50, 17);
        BigRat w = random_rat(rng, 0, 5, 9);
        RatBall A(a - w, a + w), B(b, b + w);
        EXPECT_TRUE((A + B).contains(a + b));
        EXPECT_TRUE((A - B).contains(a - b));
        EXPECT_TRUE((A * B).contains(a * b));
        if (!B.contains_zero()) {
            EXPECT_TRUE((A / B).contains(a / b));
        }
    }
    EXPECT_THROW(RatBall(1) / RatBall(-1, 1), domain_error);
    EXPECT_THROW(RatBall(2, 1), domain_error);
}

TEST(RatBall, CmpCertified)
{
    EXPECT_EQ(cmp_certified(RatBall(1), RatBall(2)), Order::Less);
    EXPECT_EQ(cmp_certified(RatBall(1, 3), RatBall(2, 4)), Order::Overlap);
    EXPECT_EQ(cmp_certified(RatBall(make_rat(1, 5), make_rat(2, 5)), RatBall(1)), Order::Less);
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
        BigRat a = random_rat(rng, -9, 9, 5), b = random_rat(rng, -9, 9, 5);
        RatBall x(a, a + make_rat(1, 3)), y(b, b + make_rat(1, 7));
        Order xy = cmp_certified(x, y), yx = cmp_certified(y, x);
        EXPECT_EQ(xy == Order::Less, yx == Order::Greater);
        EXPECT_EQ(xy == Order::Overlap, yx == Order::Overlap);
    }
}

TEST(Elementary, SpecExamples)
{
    RatBall s4 = ball_sqrt(RatBall(4));
    EXPECT_TRUE(s4.contains(BigRat(2)));
    EXPECT_LE(s4.width(), parse_rational("1e-30"));
    RatBall s2 = ball_sqrt(RatBall(2));
    EXPECT_FALSE(s2.contains(make_rat(3, 2)));
    // Independent digit-by-digit oracle to 40 digits.
    BigInt digits = oracle::long_division_sqrt(2, 40);
    BigRat ref_lo = make_rat(digits, pow_int(10, 40)), ref_hi = make_rat(digits + 1, pow_int(10, 40));
    EXPECT_TRUE(s2.lo() <= ref_hi && ref_lo <= s2.hi());
    EXPECT_EQ(ball_sqrt(RatBall(0)), RatBall(0));
    EXPECT_THROW(ball_sqrt(RatBall(-1, 1)), domain_error);

    RatBall l1 = ball_ln(RatBall(1));
    EXPECT_TRUE(l1.contains(BigRat(0)));
    EXPECT_TRUE(ball_exp(RatBall(0)).contains(BigRat(1)));
    EXPECT_TRUE(overlaps(ball_ln(RatBall(2)), oracle::ln(2)));
    EXPECT_THROW(ball_ln(RatBall(0, 1)), domain_error);

    EXPECT_EQ(ball_root(256, 8), RatBall(2));
    EXPECT_EQ(ball_root(5, 1), RatBall(5));
    RatBall r2 = ball_root(2, 2);
    EXPECT_LE(r2.width(), parse_rational("1e-20"));
    EXPECT_TRUE(overlaps(r2, oracle::root(2, 2)));

    EXPECT_TRUE(ball_powr(RatBall(2), RatBall(1)).contains(BigRat(2)));
    EXPECT_TRUE(ball_powr(RatBall(4), RatBall(make_rat(1, 2))).contains(BigRat(2)));
    EXPECT_TRUE(overlaps(ball_powr(RatBall(2), RatBall(make_rat(4, 3))), oracle::pow(2, make_rat(4, 3))));
    EXPECT_THROW(ball_powr(RatBall(0), RatBall(1)), domain_error);
}

TEST(Elementary, TightOnPointInputs)
{
    const BigRat target = parse_rational("1e-40");
    for (long v : {2L, 3L, 10L, 12345L}) {
        EXPECT_LE(ball_ln(RatBall(v)).width(), target);
        EXPECT_LE(ball_exp(RatBall(make_rat(v, 7))).width(), target * ball_exp(RatBall(make_rat(v, 7))).hi());
        EXPECT_LE(ball_sqrt(RatBall(v)).width(), target);
    }
}

TEST(Elementary, RandomContainmentAgainstMpfr)
{
    std::mt19937_64 rng(2024);
    int violations = 0;
    for (int i = 0; i < 400; ++i) {
        BigRat x = random_rat(rng, 1, 5000, 97);
        BigRat y = random_rat(rng, -40, 40, 13);
        BigRat e = random_rat(rng, -300, 300, 11);
        violations += !overlaps(ball_ln(RatBall(x)), oracle::ln(x));
        violations += !overlaps(ball_exp(RatBall(e)), oracle::exp(e));
        violations += !overlaps(ball_sqrt(RatBall(x)), oracle::sqrt(x));
        violations += !overlaps(ball_powr(RatBall(x), RatBall(y)), oracle::pow(x, y));
    }
    EXPECT_EQ(violations, 0);
}

TEST(Elementary, Identities)
{
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
        BigRat x = random_rat(rng, 1, 1000, 31);
        RatBall X(x, x + make_rat(1, 1000));
        RatBall back = ball_exp(ball_ln(X));
        EXPECT_LE(back.lo(), X.lo());
        EXPECT_GE(back.hi(), X.hi());
        RatBall p1 = ball_powr(X, RatBall(1));
        EXPECT_LE(p1.lo(), X.lo());
        EXPECT_GE(p1.hi(), X.hi());
        RatBall sq = pow(ball_sqrt(X), 2);
        EXPECT_LE(sq.lo(), X.lo());
        EXPECT_GE(sq.hi(), X.hi());
    }
}

TEST(Elementary, MonotoneRefinement)
{
    for (long v : {2L, 3L, 7L, 1000L}) {
        RatBall prev = ball_ln(RatBall(v), Precision::bits(20));
        RatBall prevs = ball_sqrt(RatBall(v), Precision::bits(20));
        for (std::int64_t b : {40, 80, 160, 320}) {
            RatBall cur = ball_ln(RatBall(v), Precision::bits(b));
            EXPECT_GE(cur.lo(), prev.lo());
            EXPECT_LE(cur.hi(), prev.hi());
            prev = cur;
            RatBall curs = ball_sqrt(RatBall(v), Precision::bits(b));
            EXPECT_GE(curs.lo(), prevs.lo());
            EXPECT_LE(curs.hi(), prevs.hi());
            prevs = curs;
        }
    }
}

TEST(Elementary, ResourceCap)
{
    Precision tiny = Precision::width(parse_rational("1e-400"), 256);
    EXPECT_THROW(ball_ln(RatBall(3), tiny), resource_error);
}

TEST(Crossover, SpecExamples)
{
    auto eq3 = log_power_crossover({8, 1, make_rat(1, 4), make_rat(1, 2)});
    ASSERT_TRUE(eq3.verdict.is_certified()) << eq3.verdict.reason;
    EXPECT_LE(eq3.n0, 1'000'000);
    for (std::int64_t n : {eq3.n0, eq3.n0 + 1, 2 * eq3.n0}) {
        auto c = check_log_power_at(eq3.claim, n);
        EXPECT_TRUE(c.holds());
        EXPECT_TRUE(c.derivative_dominated);
    }

    auto trivial = log_power_crossover({0, 0, 1, make_rat(1, 2)});
    ASSERT_TRUE(trivial.verdict.is_certified());
    EXPECT_EQ(trivial.n0, 1);

    auto lin = log_power_crossover({1, 0, 1, 1});
    ASSERT_TRUE(lin.verdict.is_certified());
    EXPECT_EQ(lin.n0, 1);

    EXPECT_THROW(log_power_crossover({-1, 0, 1, 1}), domain_error);
    EXPECT_THROW(log_power_crossover({1, 0, 1, 2}), domain_error);
}
