#pragma once

// Certified crossover points for inequalities of the form
//     cln * ln n + c0 < cpow * n^e,    cln >= 0, cpow > 0, 0 < e <= 1.
//
// A certificate for N0 consists of
//   (i)  the inequality at N0, decided by cmp_certified on enclosures, and
//   (ii) e * cpow * N0^e >= cln, decided exactly.
// (ii) says the derivative of cpow*n^e - cln*ln n - c0 is nonnegative from N0
// on, so (i) propagates to every n >= N0.

#include "irrcert/exact/elementary.hpp"
#include "irrcert/verdict.hpp"

#include <cstdint>
#include <string>

namespace irrcert {

struct LogPowerClaim {
    BigRat cln;  // >= 0
    BigRat c0;
    BigRat cpow; // > 0
    BigRat e;    // in (0, 1]

    void validate() const
    {
        if (cln < 0) throw domain_error("log coefficient must be nonnegative");
        if (cpow <= 0) throw domain_error("power coefficient must be positive");
        if (e <= 0 || e > 1) throw domain_error("exponent must lie in (0, 1]");
    }
};

struct CrossoverCheck {
    std::int64_t n = 0;
    RatBall lhs; // cln ln n + c0
    RatBall rhs; // cpow n^e
    Order order = Order::Overlap;
    bool derivative_dominated = false; // e cpow n^e >= cln, exact
    bool holds() const { return order == Order::Less; }
};

struct CrossoverCertificate {
    LogPowerClaim claim;
    std::int64_t n0 = 0;
    CrossoverCheck at_n0;
    Verdict verdict;
};

namespace detail {

/// Exact test of e * cpow * n^e >= cln with e = u/v: (e cpow)^v n^u >= cln^v.
inline bool derivative_dominates(const LogPowerClaim& c, std::int64_t n)
{
    if (c.cln == 0) return true;
    unsigned long u = c.e.get_num().get_ui();
    unsigned long v = c.e.get_den().get_ui();
    BigRat lhs = pow_rat(c.e * c.cpow, v) * BigRat(pow_int(BigInt(static_cast<long>(n)), u));
    return lhs >= pow_rat(c.cln, v);
}

} // namespace detail

inline CrossoverCheck check_log_power_at(const LogPowerClaim& c, std::int64_t n, const Precision& prec = Precision::bits(96))
{
    if (n < 1) throw domain_error("crossover index must be >= 1");
    CrossoverCheck out;
    out.n = n;
    RatBall nb{BigInt(static_cast<long>(n))};
    out.lhs = RatBall(c.cln) * ball_ln(nb, prec) + RatBall(c.c0);
    out.rhs = RatBall(c.cpow) * ball_powr(nb, RatBall(c.e), prec);
    out.order = cmp_certified(out.lhs, out.rhs);
    out.derivative_dominated = detail::derivative_dominates(c, n);
    return out;
}

/// Finds N0 with a certificate that the claim holds for all n >= N0.
/// Searches n <= prec.max_work; Inconclusive if nothing is certified there.
inline CrossoverCertificate log_power_crossover(const LogPowerClaim& c, const Precision& prec = Precision::bits(96))
{
    c.validate();
    if (c.e.get_num() > 64 || c.e.get_den() > 64)
        throw domain_error("exponent numerator and denominator must be at most 64");
    CrossoverCertificate cert;
    cert.claim = c;
    const std::int64_t cap = prec.max_work;
    const Precision check_prec = Precision::width(scale2(BigRat(1), -96), std::int64_t{1} << 16);

    // Smallest n with derivative domination; the condition is monotone in n.
    std::int64_t lo = 1, hi = 1;
    while (!detail::derivative_dominates(c, hi)) {
        lo = hi + 1;
        if (hi > cap / 2) {
            cert.verdict = Verdict::inconclusive("no derivative-dominated index below " + std::to_string(cap));
            return cert;
        }
        hi *= 2;
    }
    while (lo < hi) {
        std::int64_t mid = lo + (hi - lo) / 2;
        if (detail::derivative_dominates(c, mid)) hi = mid; else lo = mid + 1;
    }
    const std::int64_t nd = hi;

    // From nd on the gap is increasing, so "certified at n" is monotone up to
    // enclosure fuzz near the root; the final check below is what counts.
    auto certified_at = [&](std::int64_t n) { return check_log_power_at(c, n, check_prec).holds(); };
    std::int64_t top = nd;
    std::int64_t step = 1;
    while (!certified_at(top)) {
        if (top >= cap) {
            cert.verdict = Verdict::inconclusive("no certified crossover at or below " + std::to_string(cap));
            return cert;
        }
        top = std::min(cap, top + step);
        step *= 2;
    }
    std::int64_t a = std::max(nd, top - step / 2), b = top;
    while (a < b) {
        std::int64_t mid = a + (b - a) / 2;
        if (certified_at(mid)) b = mid; else a = mid + 1;
    }
    cert.n0 = b;
    cert.at_n0 = check_log_power_at(c, b, check_prec);
    if (cert.at_n0.holds() && cert.at_n0.derivative_dominated)
        cert.verdict = Verdict::certified("inequality certified at N0 and gap nondecreasing for n >= N0");
    else
        cert.verdict = Verdict::inconclusive("crossover candidate failed re-verification");
    return cert;
}

} // namespace irrcert
