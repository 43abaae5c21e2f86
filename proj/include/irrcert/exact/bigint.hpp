#pragma once

// Arbitrary-precision integers and rationals.
//
// BigInt and BigRat are GMP's C++ classes. mpq_class keeps values canonical
// (positive denominator, coprime parts) as long as every value leaving this
// header has been through canonicalize(); the constructors here do that.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace irrcert {

using BigInt = mpz_class;
using BigRat = mpq_class;

/// Raised when an argument lies outside a function's domain
/// (ln of a nonpositive ball, division by a ball containing zero, ...).
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when a configured work cap (precision bits, terms, sieve size) is hit.
class resource_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline BigRat make_rat(const BigInt& num, const BigInt& den = 1)
{
    if (den == 0) throw domain_error("rational with zero denominator");
    BigRat q(num, den);
    q.canonicalize();
    return q;
}

inline BigRat make_rat(long num, long den)
{
    return make_rat(BigInt(num), BigInt(den));
}

inline bool is_integer(const BigRat& q) { return q.get_den() == 1; }

inline BigInt floor_of(const BigRat& q)
{
    BigInt r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

inline BigInt ceil_of(const BigRat& q)
{
    BigInt r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

/// Nearest integer, ties rounded half away from zero.
inline BigInt round_half_away(const BigRat& q)
{
    const BigRat half = make_rat(1, 2);
    if (sgn(q) >= 0) return floor_of(q + half);
    return -floor_of(-q + half);
}

/// Floor division of integers (rounds toward negative infinity).
inline BigInt floor_div(const BigInt& a, const BigInt& b)
{
    if (b == 0) throw domain_error("floor_div by zero");
    BigInt r;
    mpz_fdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline BigInt pow_int(const BigInt& base, unsigned long e)
{
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline BigRat pow_rat(const BigRat& base, unsigned long e)
{
    BigInt n, d;
    mpz_pow_ui(n.get_mpz_t(), base.get_num_mpz_t(), e);
    mpz_pow_ui(d.get_mpz_t(), base.get_den_mpz_t(), e);
    return make_rat(n, d);
}

inline BigInt pow2(std::int64_t e)
{
    if (e < 0) throw domain_error("pow2 of negative exponent");
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, static_cast<unsigned long>(e));
    return r;
}

/// q * 2^e, exactly, for any sign of e.
inline BigRat scale2(const BigRat& q, std::int64_t e)
{
    BigRat r;
    if (e >= 0)
        mpq_mul_2exp(r.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
    else
        mpq_div_2exp(r.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
    return r;
}

inline std::int64_t bit_length(const BigInt& x)
{
    if (x == 0) return 0;
    return static_cast<std::int64_t>(mpz_sizeinbase(x.get_mpz_t(), 2));
}

/// floor(log2 |q|) for q != 0, computed exactly.
inline std::int64_t floor_log2(const BigRat& q)
{
    if (q == 0) throw domain_error("floor_log2 of zero");
    BigInt num = abs(q.get_num());
    const BigInt& den = q.get_den();
    std::int64_t e = bit_length(num) - bit_length(den);
    // 2^e <= |q| < 2^(e+1) fails only in the direction |q| < 2^e.
    BigRat probe = scale2(BigRat(1), e);
    if (BigRat(num, den) < probe) --e;
    return e;
}

inline BigInt isqrt(const BigInt& x)
{
    if (x < 0) throw domain_error("isqrt of negative integer");
    BigInt r;
    mpz_sqrt(r.get_mpz_t(), x.get_mpz_t());
    return r;
}

inline bool is_perfect_square(const BigInt& x)
{
    return x >= 0 && mpz_perfect_square_p(x.get_mpz_t()) != 0;
}

/// floor(x^(1/k)) and whether the root is exact.
inline std::pair<BigInt, bool> iroot(const BigInt& x, unsigned long k)
{
    if (x < 0) throw domain_error("iroot of negative integer");
    if (k == 0) throw domain_error("iroot with k = 0");
    BigInt r;
    int exact = mpz_root(r.get_mpz_t(), x.get_mpz_t(), k);
    return {r, exact != 0};
}

inline BigInt gcd(const BigInt& a, const BigInt& b)
{
    BigInt r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline BigInt factorial(unsigned long n)
{
    BigInt r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

inline std::string to_string(const BigInt& x) { return x.get_str(10); }

/// "p/q", or "p" for integers.
inline std::string to_string(const BigRat& q) { return q.get_str(10); }

/// Decimal rendering truncated to `digits` fractional digits (for humans only).
inline std::string to_decimal(const BigRat& q, int digits)
{
    BigInt scale = pow_int(10, static_cast<unsigned long>(digits));
    BigRat scaled = q * BigRat(scale);
    BigInt t = sgn(scaled) >= 0 ? floor_of(scaled) : -floor_of(-scaled);
    std::string s = BigInt(abs(t)).get_str(10);
    if (digits <= 0) return (sgn(t) < 0 ? "-" : "") + s;
    if (static_cast<int>(s.size()) <= digits) s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
    s.insert(s.size() - static_cast<std::size_t>(digits), ".");
    if (sgn(q) < 0) s.insert(0, "-");
    return s;
}

/// Parses "123", "-4/7", "0.125", "1e-30", "2.5E3".
inline BigRat parse_rational(std::string_view text)
{
    std::string s(text);
    auto fail = [&]() -> BigRat { throw std::invalid_argument("not a rational number: '" + s + "'"); };
    if (s.empty()) return fail();
    auto slash = s.find('/');
    auto parse_int = [&](const std::string& t) -> BigInt {
        if (t.empty()) fail();
        std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) fail();
        for (std::size_t j = i; j < t.size(); ++j)
            if (t[j] < '0' || t[j] > '9') fail();
        return BigInt(t[0] == '+' ? t.substr(1) : t, 10);
    };
    if (slash != std::string::npos)
        return make_rat(parse_int(s.substr(0, slash)), parse_int(s.substr(slash + 1)));

    std::int64_t exp10 = 0;
    auto epos = s.find_first_of("eE");
    std::string mant = s;
    if (epos != std::string::npos) {
        mant = s.substr(0, epos);
        std::string es = s.substr(epos + 1);
        try {
            std::size_t used = 0;
            exp10 = std::stoll(es, &used);
            if (used != es.size()) fail();
        } catch (const std::logic_error&) {
            fail();
        }
    }
    auto dot = mant.find('.');
    if (dot != std::string::npos) {
        std::string frac = mant.substr(dot + 1);
        mant = mant.substr(0, dot) + frac;
        exp10 -= static_cast<std::int64_t>(frac.size());
        if (mant == "-" || mant == "+" || mant.empty()) fail();
    }
    BigInt m = parse_int(mant);
    if (exp10 >= 0) return make_rat(m * pow_int(10, static_cast<unsigned long>(exp10)));
    return make_rat(m, pow_int(10, static_cast<unsigned long>(-exp10)));
}

} // namespace irrcert
