#pragma once

// Rigorous enclosures of sqrt, ln, exp, integer roots and real powers.
//
// Each function works at a ladder of relative working precisions
// (64, 128, 256, ... bits) and intersects the enclosures of every level it
// visits. The ladder always starts at the same level, so asking for a
// narrower target only adds levels and never moves a bound outward.

#include "irrcert/exact/ratball.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <string>

namespace irrcert {

namespace detail {

constexpr std::int64_t base_bits = 64;

/// floor(q * 2^w) for q >= 0.
inline BigInt fixed_floor(const BigRat& q, std::int64_t w) { return floor_of(scale2(q, w)); }

/// atanh(z) for 0 <= z <= 1/3, at `bits` relative working precision.
/// Fixed point with W fractional bits; every truncation is downward, so the
/// lower sum is a lower bound and each term is off by less than 3 units.
inline RatBall atanh_small(const BigRat& z, std::int64_t bits)
{
    if (z == 0) return RatBall(0);
    const std::int64_t W = bits + 8 + std::max<std::int64_t>(0, -floor_log2(z));
    BigInt t = fixed_floor(z, W);
    const BigInt z2 = fixed_floor(z * z, W);
    BigInt sum = 0, q;
    long terms = 0;
    for (long d = 1; sgn(t) > 0; d += 2, ++terms) {
        mpz_fdiv_q_ui(q.get_mpz_t(), t.get_mpz_t(), static_cast<unsigned long>(d));
        sum += q;
        t *= z2;
        mpz_fdiv_q_2exp(t.get_mpz_t(), t.get_mpz_t(), static_cast<mp_bitcnt_t>(W));
    }
    // Truncation: < 3 units per term; remainder after the last term: < 3 units.
    BigInt hi = sum + 3 * terms + 4;
    return RatBall(scale2(BigRat(sum), -W), scale2(BigRat(hi), -W));
}

inline RatBall ln2_bounds(std::int64_t bits)
{
    // Cached per working precision; the cache is per thread.
    thread_local std::map<std::int64_t, RatBall> cache;
    auto it = cache.find(bits);
    if (it != cache.end()) return it->second;
    RatBall a = atanh_small(make_rat(1, 3), bits);
    RatBall r(2 * a.lo(), 2 * a.hi());
    if (cache.size() < 64) cache.emplace(bits, r);
    return r;
}

inline RatBall ln_bounds(const BigRat& x, std::int64_t bits)
{
    if (sgn(x) <= 0) throw domain_error("ln of a nonpositive number");
    if (x == 1) return RatBall(0);
    std::int64_t m = floor_log2(x);
    BigRat y = scale2(x, -m);
    if (y > make_rat(4, 3)) {
        y = scale2(y, -1);
        ++m;
    }
    // y in (2/3, 4/3], so |z| <= 1/5.
    BigRat z = (y - 1) / (y + 1);
    RatBall at = atanh_small(BigRat(abs(z)), bits + 4);
    if (sgn(z) < 0) at = -at;
    RatBall result(2 * at.lo(), 2 * at.hi());
    if (m != 0) {
        std::int64_t mbits = 1;
        for (std::int64_t t = m < 0 ? -m : m; t > 0; t >>= 1) ++mbits;
        RatBall l2 = ln2_bounds(bits + mbits + 4);
        result = result + RatBall(BigRat(m)) * l2;
    }
    return result.rounded(bits + 4);
}

/// exp(u) for 0 <= u <= 1/2 by Taylor series with an explicit remainder,
/// as integers scaled by 2^W: returns floor and ceiling sums.
inline std::pair<BigInt, BigInt> exp_taylor_fixed(const BigRat& u, std::int64_t W)
{
    const BigInt one = pow2(W);
    const BigInt u_lo = fixed_floor(u, W), u_hi = u_lo + 1;
    BigInt t_lo = one, t_hi = one, s_lo = one, s_hi = one;
    for (unsigned long i = 1;; ++i) {
        t_lo *= u_lo;
        mpz_fdiv_q_2exp(t_lo.get_mpz_t(), t_lo.get_mpz_t(), static_cast<mp_bitcnt_t>(W));
        mpz_fdiv_q_ui(t_lo.get_mpz_t(), t_lo.get_mpz_t(), i);
        t_hi *= u_hi;
        mpz_cdiv_q_2exp(t_hi.get_mpz_t(), t_hi.get_mpz_t(), static_cast<mp_bitcnt_t>(W));
        mpz_cdiv_q_ui(t_hi.get_mpz_t(), t_hi.get_mpz_t(), i);
        s_lo += t_lo;
        s_hi += t_hi;
        if (t_hi <= 1) {
            // sum_{j > i} u^j/j! <= t_i * u/(i+1) / (1-u) <= t_i.
            s_hi += t_hi;
            break;
        }
    }
    return {s_lo, s_hi};
}

/// exp(t) for |t| <= 1/2: halve, sum, square back.
inline RatBall exp_small(const BigRat& t, std::int64_t bits)
{
    if (t == 0) return RatBall(1);
    std::int64_t halvings = static_cast<std::int64_t>(std::sqrt(static_cast<double>(bits)) / 2) + 1;
    const std::int64_t W = bits + halvings + 16;
    BigRat u = scale2(BigRat(abs(t)), -halvings);
    auto [lo, hi] = exp_taylor_fixed(u, W);
    for (std::int64_t i = 0; i < halvings; ++i) {
        lo *= lo;
        mpz_fdiv_q_2exp(lo.get_mpz_t(), lo.get_mpz_t(), static_cast<mp_bitcnt_t>(W));
        hi *= hi;
        mpz_cdiv_q_2exp(hi.get_mpz_t(), hi.get_mpz_t(), static_cast<mp_bitcnt_t>(W));
    }
    RatBall e(scale2(BigRat(lo), -W), scale2(BigRat(hi), -W));
    if (sgn(t) < 0) e = RatBall(round_down(1 / e.hi(), W), round_up(1 / e.lo(), W));
    return e;
}

/// Lower (upper = false) or upper bound of exp(x) at `bits` relative precision.
inline BigRat exp_bound(const BigRat& x, std::int64_t bits, bool upper)
{
    if (x == 0) return BigRat(1);
    double xd = x.get_d();
    if (!(std::fabs(xd) < 1e12)) throw resource_error("exp argument too large: " + to_decimal(x, 3));
    auto k = static_cast<std::int64_t>(std::llround(xd / 0.6931471805599453));
    RatBall r(x);
    if (k != 0) {
        std::int64_t kbits = 1;
        for (std::int64_t t = k < 0 ? -k : k; t > 0; t >>= 1) ++kbits;
        r = RatBall(x) - RatBall(BigRat(k)) * ln2_bounds(bits + kbits + 8);
    }
    // |r| <= ln2/2 up to the double rounding in k.
    const BigRat& end = upper ? r.hi() : r.lo();
    if (abs(end) > make_rat(1, 2)) throw domain_error("exp argument reduction failed");
    RatBall small = exp_small(end, bits + 8);
    BigRat e = upper ? small.hi() : small.lo();
    return scale2(e, k);
}

inline RatBall exp_bounds(const BigRat& x, std::int64_t bits)
{
    return RatBall(exp_bound(x, bits, false), exp_bound(x, bits, true));
}

inline RatBall sqrt_bounds(const BigRat& x, std::int64_t bits)
{
    if (sgn(x) < 0) throw domain_error("sqrt of a negative number");
    if (x == 0) return RatBall(0);
    if (is_perfect_square(x.get_num()) && is_perfect_square(x.get_den()))
        return RatBall(make_rat(isqrt(x.get_num()), isqrt(x.get_den())));
    std::int64_t s = bits - floor_log2(x) / 2 + 2;
    BigRat scaled = scale2(x, 2 * s);
    BigInt lo = isqrt(floor_of(scaled));
    BigInt c = ceil_of(scaled);
    BigInt hi = isqrt(c);
    if (hi * hi < c) hi += 1;
    return RatBall(scale2(BigRat(lo), -s), scale2(BigRat(hi), -s));
}

/// x^(1/k) for an integer x >= 1 that is not a perfect k-th power.
inline RatBall root_bounds(const BigInt& x, unsigned long k, std::int64_t bits)
{
    const std::int64_t xbits = bit_length(x);
    const std::int64_t s = bits - xbits / static_cast<std::int64_t>(k) + 2;
    if (static_cast<double>(k) * static_cast<double>(bits + 2) <= static_cast<double>(1 << 21)) {
        BigInt m = x;
        if (s >= 0)
            mpz_mul_2exp(m.get_mpz_t(), m.get_mpz_t(), static_cast<mp_bitcnt_t>(s) * k);
        else
            mpz_fdiv_q_2exp(m.get_mpz_t(), m.get_mpz_t(), static_cast<mp_bitcnt_t>(-s) * k);
        auto [r, exact] = iroot(m, k);
        BigInt up = exact ? r : BigInt(r + 1);
        return RatBall(scale2(BigRat(r), -s), scale2(BigRat(up), -s));
    }
    // Large k: exp(ln(x) / k).
    RatBall l = ln_bounds(BigRat(x), bits + 16);
    BigRat kq{BigInt(k)};
    return RatBall(exp_bound(l.lo() / kq, bits + 8, false), exp_bound(l.hi() / kq, bits + 8, true));
}

/// Ladder driver for one point: intersect levels until width <= target.
template <class F>
RatBall enclose_point(F&& f, const BigRat& x, const Precision& prec, const char* what)
{
    RatBall acc = f(x, base_bits);
    for (std::int64_t wb = 2 * base_bits; acc.width() > prec.target_width; wb *= 2) {
        if (wb > prec.max_work)
            throw resource_error(std::string(what) + ": precision cap of " + std::to_string(prec.max_work) +
                                 " bits reached");
        acc = intersect(acc, f(x, wb));
    }
    return acc;
}

/// Monotone increasing f extended to a ball.
template <class F>
RatBall enclose_increasing(F&& f, const RatBall& x, const Precision& prec, const char* what)
{
    Precision quarter = prec.scaled(make_rat(1, 4));
    if (x.is_point()) return enclose_point(f, x.lo(), quarter, what);
    RatBall lo = enclose_point(f, x.lo(), quarter, what);
    RatBall hi = enclose_point(f, x.hi(), quarter, what);
    return RatBall(lo.lo(), hi.hi());
}

} // namespace detail

/// Enclosure of sqrt(t) for every t in x. Exact for squares of rationals.
inline RatBall ball_sqrt(const RatBall& x, const Precision& prec = {})
{
    if (sgn(x.lo()) < 0) throw domain_error("ball_sqrt of a ball with negative part");
    return detail::enclose_increasing(detail::sqrt_bounds, x, prec, "ball_sqrt");
}

inline RatBall ball_ln(const RatBall& x, const Precision& prec = {})
{
    if (sgn(x.lo()) <= 0) throw domain_error("ball_ln of a nonpositive ball");
    return detail::enclose_increasing(detail::ln_bounds, x, prec, "ball_ln");
}

inline RatBall ball_exp(const RatBall& x, const Precision& prec = {})
{
    return detail::enclose_increasing(detail::exp_bounds, x, prec, "ball_exp");
}

/// Enclosure of x^(1/k) for an integer x >= 1; a point ball for perfect powers.
inline RatBall ball_root(const BigInt& x, unsigned long k, const Precision& prec = {})
{
    if (x < 1) throw domain_error("ball_root requires x >= 1");
    if (k == 0) throw domain_error("ball_root requires k >= 1");
    if (k == 1) return RatBall(x);
    auto [r, exact] = iroot(x, k);
    if (exact) return RatBall(r);
    auto f = [&](const BigRat&, std::int64_t bits) { return detail::root_bounds(x, k, bits); };
    return detail::enclose_point(f, BigRat(x), prec, "ball_root");
}

/// Enclosure of t^u = exp(u ln t) for every (t, u) in x * y.
inline RatBall ball_powr(const RatBall& x, const RatBall& y, const Precision& prec = {})
{
    if (sgn(x.lo()) <= 0) throw domain_error("ball_powr of a nonpositive base");
    if (y.is_point() && is_integer(y.lo()) && abs(y.lo()) <= 4096) {
        long k = y.lo().get_num().get_si();
        RatBall p = pow(x, static_cast<unsigned long>(k < 0 ? -k : k));
        return k < 0 ? reciprocal(p) : p;
    }
    // log2 of the result is at most |y| * (|log2 x| + 1); size ln's target from that.
    std::int64_t lx = std::max(std::abs(floor_log2(x.lo())), std::abs(floor_log2(x.hi()))) + 1;
    BigRat e = y.mag() * lx + 2;
    if (e > BigRat(prec.max_work)) throw resource_error("ball_powr result exceeds the precision cap");
    BigRat scale = scale2(4 * (y.mag() + 1), ceil_of(e).get_si());
    RatBall l = ball_ln(x, prec.scaled(1 / scale));
    return ball_exp(l * y, prec.scaled(make_rat(1, 2)));
}

} // namespace irrcert
