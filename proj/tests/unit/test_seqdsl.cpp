#include "irrcert/seq/facts.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace irrcert;
using namespace irrcert::seq;

TEST(Parser, ClosedForms)
{
    SequenceDef d = parse_sequence("2^(2^n)");
    EXPECT_STREQ(kind_name(d.kind), "closed_form");
    EXPECT_EQ(eval_term(d, 3), 256);
    EXPECT_EQ(eval_term(parse_sequence("n!"), 5), 120);
    EXPECT_EQ(eval_term(parse_sequence("(n+1)"), 7), 8);
    EXPECT_EQ(eval_term(parse_sequence("floor_div(7*n, 3) + ceil(n/4) + round(n/2)"), 5), 11 + 2 + 3);
}

TEST(Parser, PrimesKind)
{
    SequenceDef d = parse_sequence("nth_prime(n)");
    EXPECT_STREQ(kind_name(d.kind), "primes");
    EXPECT_EQ(eval_term(d, 1), 2);
    EXPECT_EQ(eval_term(d, 4), 7);
    EXPECT_STREQ(kind_name(parse_sequence("nth_prime(2*n)").kind), "closed_form");
}

TEST(Parser, RecurrenceKind)
{
    SequenceDef d = parse_sequence("t(1) = 1; t(n) = t(n-1)*a(n-1) - B*b(n-1)");
    EXPECT_STREQ(kind_name(d.kind), "recurrence");
    EXPECT_EQ(d.first_index, 1);

    Env env;
    env.add(parse_sequence("n+2", {}, "a"));
    env.add(parse_sequence("n+1", {}, "b"));
    env.set_param("B", 1);
    auto& c = env.add(parse_sequence("t(1) = 1; t(n) = t(n-1)*a(n-1) - B*b(n-1)", env.parse_context(), "c"));
    for (int n = 1; n <= 30; ++n) EXPECT_EQ(c.term(n), 1);

    SequenceDef fib = parse_sequence("t(0) = 0; t(1) = 1; t(n) = t(n-1) + t(n-2)");
    EXPECT_EQ(fib.first_index, 0);
    EXPECT_EQ(eval_term(fib, 50), BigInt("12586269025"));
}

TEST(Parser, RoundTrip)
{
    for (const char* text : {"2^(2^n)", "n!", "(n+1)", "3*n - 2/(n+1)", "nth_prime(n)^2 + floor_div(n, 2)",
                             "1 + (2/3)^n", "(n!)!", "2^(n!)", "prodprefix(a, n-1)^3*(n-1)"}) {
        ExprPtr e = parse_expression(text);
        ExprPtr back = parse_expression(print(*e));
        EXPECT_TRUE(same_structure(*e, *back)) << text << " -> " << print(*e);
        EXPECT_EQ(print(*e), print(*back));
    }
}

TEST(Parser, PositionedErrors)
{
    try {
        parse_sequence("n +\n  * 2");
        FAIL();
    } catch (const parse_error& e) {
        EXPECT_EQ(e.line(), 2);
        EXPECT_EQ(e.col(), 3);
    }
    EXPECT_THROW(parse_sequence("floor_div(n)"), parse_error);
    EXPECT_THROW(parse_sequence("nth_prime(n, 2)"), parse_error);
    EXPECT_THROW(parse_sequence("t(n-1) + 1"), parse_error);
    EXPECT_THROW(parse_sequence("t(1) = 1; t(n) = t(n-2)"), parse_error);
    EXPECT_THROW(parse_sequence("t(1) = 1; t(n) = t(n-9)"), parse_error);
    EXPECT_THROW(parse_sequence("foo(n)", ParseContext::strict({"a"})), parse_error);
    EXPECT_THROW(parse_sequence("B*n", ParseContext::strict({}, {"C"})), parse_error);
    EXPECT_THROW(parse_sequence(""), parse_error);
    EXPECT_THROW(parse_sequence("(n"), parse_error);
    EXPECT_THROW(parse_sequence("n $ 2"), parse_error);
}

TEST(Parser, FuzzedTokenStreamsNeverCrash)
{
    const std::vector<std::string> tokens = {"n", "t", "(", ")", "+", "-", "*", "/", "^", "!", ",", ";", "=", "1",
                                             "17", "nth_prime", "floor_div", "ceil", "round", "prodprefix", "a",
                                             "B", " ", "\n", "t(n-1)", "#", "99999999999999999999"};
    std::mt19937 rng(99);
    int parsed = 0, rejected = 0;
    for (int i = 0; i < 5000; ++i) {
        std::string s;
        int len = 1 + static_cast<int>(rng() % 12);
        for (int j = 0; j < len; ++j) s += tokens[rng() % tokens.size()];
        try {
            parse_sequence(s);
            ++parsed;
        } catch (const parse_error& e) {
            EXPECT_GE(e.line(), 1);
            EXPECT_GE(e.col(), 1);
            ++rejected;
        }
    }
    EXPECT_GT(parsed, 0);
    EXPECT_GT(rejected, 0);
}

TEST(Eval, Errors)
{
    SequenceDef d = parse_sequence("n/2");
    EXPECT_THROW(eval_term(d, 3), eval_error);
    EXPECT_EQ(eval_term(d, 4), 2);
    EXPECT_THROW(eval_term(d, 0), eval_error);
    EXPECT_THROW(eval_term(parse_sequence("2^(n/2)"), 3), eval_error);
    EXPECT_EQ(eval_term(parse_sequence("floor_div(n, 2)"), 3), 1);
    EXPECT_THROW(eval_term(parse_sequence("1/(n-1)"), 1), eval_error);
    EXPECT_THROW(eval_term(parse_sequence("undefined_name(n)"), 1), eval_error);

    SequenceDef tab;
    tab.kind = Table{{BigRat(3), BigRat(5)}};
    EXPECT_EQ(eval_term(tab, 2), 5);
    EXPECT_THROW(eval_term(tab, 3), eval_error);

    Env env;
    env.add(parse_sequence("b(n) + 1", {}, "a"));
    env.add(parse_sequence("a(n) + 1", {}, "b"));
    EXPECT_THROW(env.at("a").value(1), eval_error);
}

TEST(Eval, MemoTransparencyAndDeterminism)
{
    const char* text = "t(1) = 3; t(n) = t(n-1)^2 - 2*n";
    Env warm;
    auto& w = warm.add(parse_sequence(text));
    for (int n = 1; n <= 12; ++n) w.value(n);
    for (int n = 1; n <= 12; ++n) {
        Env cold;
        EXPECT_EQ(cold.add(parse_sequence(text)).value(n), w.value(n));
        EXPECT_EQ(eval_term(parse_sequence(text), n), w.term(n));
    }
}

TEST(Eval, CounterexampleMatchesStraightLine)
{
    // a1 = 2, delta = 1: a(k+1) = k*(a1...ak)^3 for odd k, 2*a(k) for even k.
    const char* text = "t(1) = 2; t(n) = (n-1-2*floor_div(n-1, 2)) * (n-1) * prodprefix(t, n-1)^3"
                       " + (1-(n-1-2*floor_div(n-1, 2))) * 2*t(n-1)";
    Env env;
    auto& a = env.add(parse_sequence(text));
    auto ref = oracle::counterexample_terms(2, 3, 10);
    for (int k = 1; k <= 10; ++k) EXPECT_EQ(a.term(k), ref[k - 1]) << k;
    EXPECT_TRUE(check_fact_on_window(a, MonotoneNondecreasing{1}, Window(1, 9)).is_certified());
}

TEST(Facts, WindowAudit)
{
    Env env;
    auto& a = env.add(parse_sequence("n+2", {}, "a"));
    Verdict v = check_fact_on_window(a, EventuallyGe{parse_expression("2"), 1}, Window(1, 100), &env);
    EXPECT_TRUE(v.is_certified());
    ASSERT_EQ(v.assumed.size(), 1u);
    EXPECT_EQ(v.assumed[0].audited, Window(1, 100));

    Verdict bad = check_fact_on_window(a, EventuallyGe{parse_expression("n+3"), 1}, Window(1, 10), &env);
    EXPECT_TRUE(bad.is_refuted());
    EXPECT_EQ(bad.index, 1);

    // Series terms b_n / prod a_i = 2(n+1)/(n+2)! for a_n = n+2, b_n = n+1.
    auto term = [](std::int64_t n) -> BigRat {
        return make_rat(BigInt(2 * (n + 1)), factorial(static_cast<unsigned long>(n + 2)));
    };
    EXPECT_TRUE(check_fact_on_window(term, RatioDominated{make_rat(1, 2), 1}, Window(1, 50)).is_certified());
    EXPECT_TRUE(check_fact_on_window(term, RatioDominated{make_rat(1, 5), 1}, Window(1, 50)).is_refuted());

    auto d = [](std::int64_t n) -> BigRat { return 1 + pow_rat(make_rat(2, 3), static_cast<unsigned long>(n)); };
    EXPECT_TRUE(check_fact_on_window(d, LogTailDominated{1, make_rat(2, 3), 1}, Window(1, 40)).is_certified());
    auto constant = [](std::int64_t) -> BigRat { return make_rat(3, 2); };
    Verdict fake = check_fact_on_window(constant, LogTailDominated{1, make_rat(1, 2), 1}, Window(1, 20));
    EXPECT_TRUE(fake.is_refuted());

    EXPECT_THROW(check_fact_on_window(term, RatioDominated{1, 1}, Window(1, 2)), std::invalid_argument);
}
