// Acceptance suite: one PASS/FAIL line per criterion. Expected values come
// from independent oracles (MPFR, trial division, straight-line recomputation).

#include "irrcert/irrcert.hpp"
#include "oracle.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <regex>
#include <sstream>

using namespace irrcert;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string secs(double s)
{
    std::ostringstream o;
    o.precision(2);
    o << std::fixed << s << " s";
    return o.str();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

// The oracle interval holds the true value and is far narrower than any ball
// under test, so a sound ball must meet it.
constexpr mpfr_prec_t fine_bits = 2048;

bool sound(const RatBall& b, const oracle::Interval& o) { return b.lo() <= o.hi() && o.lo() <= b.hi(); }

oracle::Interval fine(const mpq_class& q) { return oracle::Interval(q, fine_bits); }

std::string spec(const std::string& name) { return std::string(IRRCERT_SPEC_DIR) + "/" + name; }

SeriesInstance load(const std::string& name) { return io::instantiate(io::load_spec(spec(name))); }

// 1. Randomized enclosure containment.
Outcome criterion1()
{
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20240611);
    auto rat = [&](long lo, long hi, long den) -> BigRat {
        return make_rat(std::uniform_int_distribution<long>(lo, hi)(rng), std::uniform_int_distribution<long>(1, den)(rng));
    };
    auto ball = [&](long lo, long hi) {
        BigRat c = rat(lo, hi, 997);
        BigRat r = rat(0, 5, 1'000'000);
        return RatBall(c - r, c + r);
    };
    // A point of the ball chosen uniformly on a grid.
    auto point = [&](const RatBall& b) -> BigRat { return b.lo() + b.width() * rat(0, 1000, 1) / 1000; };

    int ops = 0, violations = 0;
    while (ops < 10'000) {
        const int kind = ops % 10;
        ++ops;
        if (kind < 5) {
            RatBall x = ball(-500, 500), y = ball(1, 500);
            BigRat px = point(x), py = point(y);
            RatBall r;
            BigRat exact;
            switch (kind) {
            case 0: r = x + y; exact = px + py; break;
            case 1: r = x - y; exact = px - py; break;
            case 2: r = x * y; exact = px * py; break;
            case 3: r = x / y; exact = px / py; break;
            default: {
                unsigned long k = 1 + ops % 7;
                r = pow(x, k);
                exact = pow_rat(px, k);
            }
            }
            if (!r.contains(exact)) ++violations;
            continue;
        }
        RatBall x = ball(1, 5000);
        BigRat px = point(x);
        switch (kind) {
        case 5: if (!sound(ball_ln(x), fine(px).apply_increasing(mpfr_log))) ++violations; break;
        case 6: {
            RatBall e = ball(-200, 200) / RatBall(BigRat(4));
            BigRat pe = point(e);
            if (!sound(ball_exp(e), fine(pe).apply_increasing(mpfr_exp))) ++violations;
            break;
        }
        case 7: if (!sound(ball_sqrt(x), fine(px).apply_increasing(mpfr_sqrt))) ++violations; break;
        case 8: {
            BigInt n = BigInt(static_cast<long>(std::uniform_int_distribution<long>(1, 1'000'000'000)(rng)));
            unsigned long k = 2 + ops % 9;
            auto rootk = [k](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t rnd) { return mpfr_rootn_ui(r, a, k, rnd); };
            if (!sound(ball_root(n, k), fine(mpq_class(n)).apply_increasing(rootk))) ++violations;
            break;
        }
        default: {
            RatBall y = ball(-20, 20) / RatBall(BigRat(2));
            BigRat py = point(y);
            oracle::Interval ref = (fine(px).apply_increasing(mpfr_log) * fine(py)).apply_increasing(mpfr_exp);
            if (!sound(ball_powr(x, y), ref)) ++violations;
        }
        }
    }
    const double dt = seconds_since(t0);
    return {violations == 0 && dt < 60,
            std::to_string(ops) + " operations, " + std::to_string(violations) + " violations, " + secs(dt)};
}

// 2. Witness for the telescoping series.
Outcome criterion2()
{
    SeriesInstance s = load("telescoping.json");
    WitnessSearch ws = search_witness(s, 4, 10, 40);
    bool ok = ws.witness && ws.witness->B == 1 && ws.witness->N == 1;
    if (ok)
        for (const auto& c : ws.witness->c) ok = ok && c == 1;
    ESWitness w100 = construct_c(s, 1, 1, 100);
    Verdict v = verify_witness(s, w100);
    bool window_ok = v.is_certified() && w100.len() == 100;
    for (const auto& f : v.assumed) window_ok = window_ok && f.audited == Window(1, 100);
    // Telescoping: the sum of the first n terms is 1 - 2/(n+2)!.
    const BigRat expected = 1 - make_rat(2, factorial(32));
    const bool sum_ok = s.partial_sum(30) == expected;
    return {ok && window_ok && sum_ok, std::string("witness B = 1, N = 1, c = 1: ") + (ok ? "yes" : "no") +
                                           "; window [1, 100] verified: " + (window_ok ? "yes" : "no") +
                                           "; partial_sum(30) = 1 - 2/32!: " + (sum_ok ? "yes" : "no")};
}

// 3. No witness and denominator refutation for e - 2.
Outcome criterion3()
{
    const auto t0 = Clock::now();
    SeriesInstance s = load("e_minus_2.json");
    WitnessSearch ws = search_witness(s, 64, 10, 40);
    int refuted = 0;
    std::int64_t worst_n = 0;
    for (long q = 1; q <= 50; ++q) {
        DenominatorRefutation r = denominator_refutation(s, BigInt(q), 60);
        if (r.verdict.is_refuted()) {
            ++refuted;
            worst_n = std::max(worst_n, *r.verdict.index);
        }
    }
    const double dt = seconds_since(t0);
    const bool ok = ws.verdict.is_inconclusive() && !ws.witness && refuted == 50 && dt < 30;
    return {ok, "search " + std::string(to_string(ws.verdict.status)) + " after " + std::to_string(ws.candidates) +
                    " candidates; " + std::to_string(refuted) + "/50 denominators refuted (largest n = " +
                    std::to_string(worst_n) + "); " + secs(dt)};
}

// 4. R-sequence recursion residuals.
Outcome criterion4()
{
    SeriesInstance tel = load("telescoping.json");
    SeriesInstance em2 = load("e_minus_2.json");
    RSequence rt = r_sequence(tel, 1, 1, 20);
    RSequence re = r_sequence(em2, 1, 1, 20);
    auto residuals_ok = [](const RSequence& r) {
        std::size_t with_residual = 0;
        for (std::size_t i = 0; i + 1 < r.values.size(); ++i) {
            if (!r.values[i].residual_ok) return false;
            ++with_residual;
        }
        return with_residual >= 19;
    };
    // Independent value: R_n = a_1...a_{n-1} sum_{k>n} b_k/(a_1...a_k) = 1/(n+2) for the telescoping series.
    bool exact_ok = true;
    for (const auto& e : rt.values) exact_ok = exact_ok && e.R.contains(make_rat(1, e.n + 2));
    const bool ok = residuals_ok(rt) && residuals_ok(re) && !rt.small_indices.empty() && exact_ok;
    return {ok, "residual balls contain 0 on n <= 20 for both families: " +
                    std::string(residuals_ok(rt) && residuals_ok(re) ? "yes" : "no") + "; small |R_n| indices " +
                    std::to_string(rt.small_indices.size()) + " (first " +
                    (rt.small_indices.empty() ? std::string("-") : std::to_string(rt.small_indices.front())) + ")"};
}

// 5. ALPHA and the rational candidate sweep for sum 2^(-n!).
Outcome criterion5()
{
    const auto t0 = Clock::now();
    SeriesInstance s = load("liouville.json");
    Verdict st;
    RatBall a3 = alpha_quantity(s, 1, 3, Precision::bits(256), &st);
    // Oracle: 2^9 (2^-24 + 2^-120 + 2^-720) plus a tail below 2^-5000.
    oracle::Interval ref(mpq_class(0), 400);
    {
        mpq_class sum = 0;
        for (unsigned long f : {24ul, 120ul, 720ul}) {
            mpz_class d;
            mpz_ui_pow_ui(d.get_mpz_t(), 2, f - 9);
            sum += mpq_class(1, 1) / mpq_class(d);
        }
        ref = oracle::Interval(sum, 400);
    }
    const bool alpha_ok = st.is_certified() && a3.hi() < 1 && sgn(a3.lo()) > 0 && a3.overlaps(RatBall(ref.lo(), ref.hi()));
    RationalSweep sw = refute_rational_candidates(s, BigInt(1'000'000), 6);
    std::int64_t max_n = 0;
    for (const auto& g : sw.refuted) max_n = std::max(max_n, g.n);
    const double dt = seconds_since(t0);
    const bool ok = alpha_ok && sw.verdict.is_certified() && sw.refuted_count == 1'000'000 && max_n <= 6 && dt < 30;
    return {ok, "ALPHA(3) for q = 1 certified in (0, 1): " + std::string(alpha_ok ? "yes" : "no") + "; " +
                    sw.refuted_count.get_str() + " of 10^6 candidates refuted with n <= " + std::to_string(max_n) + "; " +
                    secs(dt)};
}

// 6. The two corollary inequalities.
Outcome criterion6()
{
    seq::SequenceDef a;
    seq::Table t;
    for (const auto& v : oracle::cor2_family(12)) t.values.push_back(BigRat(v));
    a.kind = t;
    SeriesInstance fam(a, seq::parse_sequence("1"), Form::Plain);
    Cor2Report pass = check_hancl_cor2(fam, 3, Window(6, 12));
    SeriesInstance dbl = SeriesInstance::parse("2^(2^n)", "1", Form::Plain);
    Cor2Report fail = check_hancl_cor2(dbl, 2, Window(6, 12));
    const bool ok = pass.a_bound.is_certified() && pass.b_bound.is_certified() && pass.verdict.is_certified() &&
                    fail.a_bound.is_refuted() && fail.a_bound.index == 6 && fail.verdict.index == 6;
    return {ok, "margin family on [6, 12]: a-bound " + std::string(to_string(pass.a_bound.status)) + ", b-bound " +
                    to_string(pass.b_bound.status) + "; 2^(2^n): a-bound " + to_string(fail.a_bound.status) +
                    (fail.a_bound.index ? "(" + std::to_string(*fail.a_bound.index) + ")" : "")};
}

// 7. Effective exponents.
Outcome criterion7()
{
    SeriesInstance liou = load("liouville.json");
    auto aps = approximants(liou, 4, Precision::bits(64));
    const Kappa& k4 = aps.at(3).kappa_product;
    // Oracle: -ln(2^-120 + 2^-720) / ln(2^33).
    mpq_class gap = mpq_class(1) / mpq_class(mpz_class(1) << 120) + mpq_class(1) / mpq_class(mpz_class(1) << 720);
    oracle::Interval lg = oracle::ln(gap);
    oracle::Interval l33 = oracle::ln(mpq_class(mpz_class(1) << 33));
    mpq_class ref_lo = -lg.hi() / l33.hi(), ref_hi = -lg.lo() / l33.lo();
    const bool k4_ok = k4.defined && !k4.infinite && !k4.lower_only && k4.ball.contains(make_rat(120, 33)) &&
                       k4.ball.width() < make_rat(1, 1000) && k4.ball.overlaps(RatBall(ref_lo, ref_hi));
    SeriesInstance geo = load("geometric.json");
    TranscendenceReport g = transcendence_report(geo, 20);
    bool geo_ok = !g.approximants.empty();
    for (const auto& ap : g.approximants)
        geo_ok = geo_ok && !ap.kappa.infinite && !(ap.kappa.defined && ap.kappa.ball.lo() > 2);
    return {k4_ok && geo_ok, "kappa_4 = [" + to_decimal(k4.ball.lo(), 6) + ", " + to_decimal(k4.ball.hi(), 6) +
                                 "] contains 120/33: " + (k4_ok ? "yes" : "no") +
                                 "; geometric control kappa lo > 2 never: " + (geo_ok ? "yes" : "no")};
}

// 8. The counterexample.
Outcome criterion8()
{
    CounterexampleReport r = counterexample_sequence(1, 2, 3, 12, 2);
    std::vector<mpz_class> ref = oracle::counterexample_terms(2, 3, 13);
    bool terms_ok = r.terms.size() == ref.size();
    for (std::size_t i = 0; terms_ok && i < ref.size(); ++i) terms_ok = r.terms[i] == ref[i];
    const std::vector<std::int64_t> even{2, 4, 6, 8, 10, 12};
    const bool ok = terms_ok && r.failures == even && r.fixed_failures.empty() && r.original_claim.is_refuted() &&
                    r.fixed_claim.is_certified();
    std::string f;
    for (auto k : r.failures) f += (f.empty() ? "" : ",") + std::to_string(k);
    return {ok, "terms match recomputation: " + std::string(terms_ok ? "yes" : "no") + "; failures at A = 3: {" + f +
                    "}; failures of the fix at A = 2: " + std::to_string(r.fixed_failures.size())};
}

// 9. Log-power crossover certificate.
Outcome criterion9()
{
    const auto t0 = Clock::now();
    LogPowerClaim claim{8, 1, make_rat(1, 4), make_rat(1, 2)};
    CrossoverCertificate c = log_power_crossover(claim);
    bool ok = c.verdict.is_certified();
    // Re-verify: exact derivative domination (e cpow)^2 n >= cln^2, i.e. n >= 4096,
    // and the inequality itself at N0, N0 + 1, 2 N0 against MPFR.
    ok = ok && c.at_n0.derivative_dominated && BigRat(c.n0) * pow_rat(make_rat(1, 8), 2) >= 64;
    for (std::int64_t n : {c.n0, c.n0 + 1, 2 * c.n0}) {
        oracle::Interval lhs = fine(mpq_class(n)).apply_increasing(mpfr_log);
        oracle::Interval rhs = fine(mpq_class(n)).apply_increasing(mpfr_sqrt);
        ok = ok && 8 * lhs.hi() + 1 < rhs.lo() / 4 && check_log_power_at(claim, n).holds();
    }
    int violations = 0;
    for (std::int64_t n = c.n0; ok && n <= c.n0 + 10'000; ++n) violations += !check_log_power_at(claim, n).holds();
    const double dt = seconds_since(t0);
    ok = ok && violations == 0 && dt < 10;
    return {ok, "N0 = " + std::to_string(c.n0) + ", " + std::to_string(violations) + " violations on [N0, N0 + 10^4], " +
                    secs(dt)};
}

// 10. Primes.
Outcome criterion10()
{
    auto ref = oracle::trial_division_primes(20'000);
    bool table_ok = true;
    for (std::int64_t i = 1; i <= 10'000; ++i)
        table_ok = table_ok && nth_prime(i) == BigInt(static_cast<unsigned long>(ref[static_cast<std::size_t>(i - 1)]));
    const bool p1000 = nth_prime(1000) == 7919;
    PrimeRatioStats st = prime_ratio_window(10'000, 20'000);
    const bool ratio_ok = !st.empty && st.max_ratio <= make_rat(105, 100);
    auto oracle_order = [&](long N, const mpq_class& eps) {
        mpq_class diff(static_cast<long>(ref[static_cast<std::size_t>(2 * N - 1)] - ref[static_cast<std::size_t>(N - 1)]));
        oracle::Interval root = oracle::sqrt(mpq_class(static_cast<long>(ref[static_cast<std::size_t>(N - 1)])));
        oracle::Interval rhs = oracle::pow(mpq_class(N), mpq_class(1, 2) + eps);
        mpq_class lhs_lo = diff / root.hi(), lhs_hi = diff / root.lo();
        if (lhs_hi < rhs.lo()) return Order::Less;
        if (lhs_lo > rhs.hi()) return Order::Greater;
        return Order::Overlap;
    };
    bool eq5_ok = true;
    std::string verdicts;
    for (long N : {1000L, 10'000L})
        for (const BigRat& eps : {make_rat(1, 10), make_rat(1, 2)}) {
            DoubleSqrtReport d = double_sqrt_check(N, eps);
            eq5_ok = eq5_ok && d.order == oracle_order(N, mpq_class(eps)) && d.order != Order::Overlap;
            verdicts += (verdicts.empty() ? "" : ", ") + std::string("N=") + std::to_string(N) + " eps=" + to_string(eps) +
                        ": " + to_string(d.verdict.status);
        }
    const bool ok = table_ok && p1000 && ratio_ok && eq5_ok;
    return {ok, "first 10^4 primes match: " + std::string(table_ok ? "yes" : "no") + "; p_1000 = 7919: " +
                    (p1000 ? "yes" : "no") + "; max ratio on [10^4, 2*10^4] = " + to_decimal(st.max_ratio, 6) + "; " +
                    verdicts};
}

// 11. CLI determinism and schema round-trip.
std::pair<int, std::string> capture(const std::string& cmd)
{
    std::string out;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return {-1, out};
    std::array<char, 65536> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

Outcome criterion11()
{
    const std::string cli = IRRCERT_CLI_PATH, s = IRRCERT_SPEC_DIR;
    const std::vector<std::string> commands = {
        "eval " + s + "/telescoping.json --depth 12",
        "eval " + s + "/liouville.json --depth 4",
        "eval " + s + "/zero_b.json",
        "check erdos-straus " + s + "/telescoping.json --Bmax 4",
        "check erdos-straus " + s + "/e_minus_2.json --jobs 2",
        "check erdos-straus-cor " + s + "/telescoping.json",
        "check prime-series " + s + "/prime_series.json --to 300",
        "check hancl " + s + "/cor2_family.json --A 3 --s 6 --from 6 --to 12 --qmax 0",
        "check hancl-cor2 " + s + "/double_exponential.json --A 2",
        "check hancl-rucki-1 " + s + "/liouville.json --delta 1",
        "check hancl-rucki-2 " + s + "/liouville.json --delta 1 --t 2",
        "counterexample --delta 1 --A 3 --kmax 12",
        "primes --nmin 10000 --nmax 20000 --epsilon 1/10",
        "roth " + s + "/liouville.json --kmax 6",
    };
    const std::regex runtime("\"runtime_ms\": [0-9]+");
    int deterministic = 0;
    for (const auto& c : commands) {
        auto [code1, out1] = capture(cli + " " + c + " 2>/dev/null");
        auto [code2, out2] = capture(cli + " " + c + " 2>/dev/null");
        if (code1 != 0 || code2 != 0) continue;
        if (std::regex_replace(out1, runtime, "") != std::regex_replace(out2, runtime, "")) continue;
        auto j = io::json::parse(out1, nullptr, false);
        if (j.is_discarded() || j.value("version", "") != io::report_version) continue;
        ++deterministic;
    }
    // Schema round-trip of every documented command against docs/*.schema.json.
    const std::string script = std::string(IRRCERT_SOURCE_DIR) + "/tests/cli/check_reports.py";
    auto [schema_code, schema_out] = capture(std::string(IRRCERT_PYTHON) + " " + script + " " + cli + " " +
                                             IRRCERT_SOURCE_DIR + "/docs " + s + " 2>&1");
    const bool ok = deterministic == static_cast<int>(commands.size()) && schema_code == 0;
    return {ok, std::to_string(deterministic) + "/" + std::to_string(commands.size()) +
                    " commands byte-identical across two runs; schema suite " + (schema_code == 0 ? "passed" : "failed")};
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"enclosure containment", criterion1},   {"Erdos-Straus witness", criterion2},
        {"Erdos-Straus refutation", criterion3}, {"R-sequence soundness", criterion4},
        {"ALPHA sweep", criterion5}, {"doubly exponential bounds", criterion6},
        {"Roth exponent", criterion7},           {"counterexample", criterion8},
        {"log-power certificate", criterion9},   {"primes", criterion10},
        {"CLI", criterion11},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS " : "FAIL ") << i + 1 << " " << criteria[i].first << ": " << o.detail << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
