#pragma once

// Independent reference values for the tests: MPFR with directed rounding,
// trial-division primes and straight-line integer recomputation.

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <utility>
#include <vector>

namespace oracle {

constexpr mpfr_prec_t default_bits = 200; // well beyond 40 decimal digits

/// [lo, hi] as MPFR numbers with outward rounding.
class Interval {
public:
    explicit Interval(mpfr_prec_t bits = default_bits)
    {
        mpfr_init2(lo_, bits);
        mpfr_init2(hi_, bits);
        mpfr_set_zero(lo_, 1);
        mpfr_set_zero(hi_, 1);
    }
    Interval(const mpq_class& q, mpfr_prec_t bits = default_bits) : Interval(bits)
    {
        mpfr_set_q(lo_, q.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(hi_, q.get_mpq_t(), MPFR_RNDU);
    }
    Interval(const Interval& o) : Interval(mpfr_get_prec(o.lo_))
    {
        mpfr_set(lo_, o.lo_, MPFR_RNDN);
        mpfr_set(hi_, o.hi_, MPFR_RNDN);
    }
    Interval& operator=(const Interval& o)
    {
        if (this != &o) {
            mpfr_set_prec(lo_, mpfr_get_prec(o.lo_));
            mpfr_set_prec(hi_, mpfr_get_prec(o.hi_));
            mpfr_set(lo_, o.lo_, MPFR_RNDN);
            mpfr_set(hi_, o.hi_, MPFR_RNDN);
        }
        return *this;
    }
    ~Interval()
    {
        mpfr_clear(lo_);
        mpfr_clear(hi_);
    }

    mpfr_prec_t prec() const { return mpfr_get_prec(lo_); }
    mpfr_ptr lo_mut() { return lo_; }
    mpfr_ptr hi_mut() { return hi_; }

    mpq_class lo() const
    {
        mpq_class q;
        mpfr_get_q(q.get_mpq_t(), lo_);
        return q;
    }
    mpq_class hi() const
    {
        mpq_class q;
        mpfr_get_q(q.get_mpq_t(), hi_);
        return q;
    }

    // Increasing functions.
    template <class F>
    Interval apply_increasing(F f) const
    {
        Interval r(prec());
        f(r.lo_, lo_, MPFR_RNDD);
        f(r.hi_, hi_, MPFR_RNDU);
        return r;
    }

    friend Interval operator*(const Interval& a, const Interval& b)
    {
        Interval r(a.prec());
        mpfr_t t;
        mpfr_init2(t, a.prec());
        const mpfr_srcptr as[2] = {a.lo_, a.hi_};
        const mpfr_srcptr bs[2] = {b.lo_, b.hi_};
        bool first = true;
        for (auto x : as)
            for (auto y : bs) {
                mpfr_mul(t, x, y, MPFR_RNDD);
                if (first || mpfr_less_p(t, r.lo_)) mpfr_set(r.lo_, t, MPFR_RNDN);
                mpfr_mul(t, x, y, MPFR_RNDU);
                if (first || mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDN);
                first = false;
            }
        mpfr_clear(t);
        return r;
    }

private:
    mpfr_t lo_, hi_;
};

inline Interval ln(const mpq_class& x) { return Interval(x).apply_increasing(mpfr_log); }
inline Interval exp(const mpq_class& x) { return Interval(x).apply_increasing(mpfr_exp); }
inline Interval sqrt(const mpq_class& x) { return Interval(x).apply_increasing(mpfr_sqrt); }

/// x^y = exp(y ln x) for x > 0.
inline Interval pow(const mpq_class& x, const mpq_class& y)
{
    Interval l = ln(x) * Interval(y);
    return l.apply_increasing(mpfr_exp);
}

/// x^(1/k) for x >= 0.
inline Interval root(const mpq_class& x, unsigned long k)
{
    return Interval(x).apply_increasing([k](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t rnd) {
        return mpfr_rootn_ui(r, a, k, rnd);
    });
}

/// First `count` primes by trial division.
inline std::vector<std::uint64_t> trial_division_primes(std::size_t count)
{
    std::vector<std::uint64_t> out;
    for (std::uint64_t v = 2; out.size() < count; ++v) {
        bool prime = true;
        for (std::uint64_t d = 2; d * d <= v; ++d)
            if (v % d == 0) {
                prime = false;
                break;
            }
        if (prime) out.push_back(v);
    }
    return out;
}

/// Digit-by-digit square root: floor(sqrt(x) * 10^digits) for x >= 0.
inline mpz_class long_division_sqrt(const mpz_class& x, unsigned digits)
{
    mpz_class scaled = x;
    for (unsigned i = 0; i < 2 * digits; ++i) scaled *= 10;
    // Newton from above on integers, independent of mpz_sqrt.
    if (scaled == 0) return 0;
    mpz_class r = scaled, prev;
    do {
        prev = r;
        r = (r + scaled / r) / 2;
    } while (r < prev);
    return prev;
}

/// Counterexample family by straight-line recomputation:
/// a1 given; a_{k+1} = k * (a_1 ... a_k)^e for odd k, 2 a_k for even k.
inline std::vector<mpz_class> counterexample_terms(const mpz_class& a1, unsigned long e, int kmax)
{
    std::vector<mpz_class> a{a1};
    for (int k = 1; k < kmax; ++k) {
        if (k % 2 == 1) {
            mpz_class prod = 1;
            for (const auto& v : a) prod *= v;
            mpz_class p;
            mpz_pow_ui(p.get_mpz_t(), prod.get_mpz_t(), e);
            a.push_back(mpz_class(k) * p);
        } else {
            a.push_back(2 * a.back());
        }
    }
    return a;
}

/// prod_{j >= from} (1 + (2/3)^j) from `count` explicit factors; the rest
/// lies in [1, exp(3 (2/3)^(from + count))].
inline Interval two_thirds_tail_product(long from, long count)
{
    Interval acc(mpq_class(1));
    for (long j = from; j < from + count; ++j) {
        mpz_class num, den;
        mpz_ui_pow_ui(num.get_mpz_t(), 2, static_cast<unsigned long>(j));
        mpz_ui_pow_ui(den.get_mpz_t(), 3, static_cast<unsigned long>(j));
        acc = acc * Interval(mpq_class(1) + mpq_class(num, den));
    }
    mpz_class num, den;
    mpz_ui_pow_ui(num.get_mpz_t(), 2, static_cast<unsigned long>(from + count));
    mpz_ui_pow_ui(den.get_mpz_t(), 3, static_cast<unsigned long>(from + count));
    Interval rest = exp(mpq_class(3 * num, den));
    mpfr_set_ui(rest.lo_mut(), 1, MPFR_RNDD);
    return acc * rest;
}

/// floor(3^(2^n) exp(-4 (4/3)^n)) for n = 1..nmax, with values below 1 raised to 1.
inline std::vector<mpz_class> cor2_family(int nmax)
{
    std::vector<mpz_class> out;
    for (int n = 1; n <= nmax; ++n) {
        for (mpfr_prec_t bits = 256 + 2 * (mpfr_prec_t(1) << n);; bits *= 2) {
            mpz_class p4, p3, two_n;
            mpz_ui_pow_ui(p4.get_mpz_t(), 4, static_cast<unsigned long>(n));
            mpz_ui_pow_ui(p3.get_mpz_t(), 3, static_cast<unsigned long>(n));
            mpz_ui_pow_ui(two_n.get_mpz_t(), 2, static_cast<unsigned long>(n));
            Interval e = Interval(mpq_class(two_n), bits) * Interval(mpq_class(3), bits).apply_increasing(mpfr_log);
            Interval shift(mpq_class(-4 * p4, p3), bits);
            mpfr_add(e.lo_mut(), e.lo_mut(), shift.lo_mut(), MPFR_RNDD);
            mpfr_add(e.hi_mut(), e.hi_mut(), shift.hi_mut(), MPFR_RNDU);
            Interval v = e.apply_increasing(mpfr_exp);
            mpz_class lo, hi;
            mpfr_get_z(lo.get_mpz_t(), v.lo_mut(), MPFR_RNDD);
            mpfr_get_z(hi.get_mpz_t(), v.hi_mut(), MPFR_RNDD);
            if (lo == hi) {
                out.push_back(lo < 1 ? mpz_class(1) : lo);
                break;
            }
        }
    }
    return out;
}

} // namespace oracle
