#pragma once

// Rigorous enclosures of real numbers by pairs of exact rationals.
//
// Every operation on RatBall returns a ball containing every exact result
// obtainable from points of the inputs. Outward rounding to dyadic rationals
// keeps denominators bounded without ever giving up containment.

#include "irrcert/exact/bigint.hpp"

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <string>

namespace irrcert {

/// Requested accuracy of an enclosure.
///
/// `target_width` is an absolute width bound. `max_work` caps the work spent
/// on one evaluation: for elementary functions it is the largest working
/// precision in bits, elsewhere the number of terms or iterations.
struct Precision {
    BigRat target_width = make_rat(BigInt(1), pow_int(10, 40));
    std::int64_t max_work = std::int64_t{1} << 22;

    static Precision width(const BigRat& w, std::int64_t max_work = std::int64_t{1} << 22)
    {
        if (w <= 0) throw domain_error("precision target width must be positive");
        if (max_work <= 0) throw domain_error("precision max_work must be positive");
        return Precision{w, max_work};
    }

    /// Width 2^-bits.
    static Precision bits(std::int64_t bits) { return width(scale2(BigRat(1), -bits)); }

    /// ceil(log2(1 / target_width)), clamped below at 0.
    std::int64_t bits_required() const
    {
        std::int64_t e = floor_log2(target_width);
        return std::max<std::int64_t>(0, -e);
    }

    Precision scaled(const BigRat& factor) const { return Precision{target_width * factor, max_work}; }
};

// Rounding to dyadic rationals with `bits` significant bits.
inline BigRat round_down(const BigRat& q, std::int64_t bits)
{
    if (q == 0) return q;
    std::int64_t shift = bits - 1 - floor_log2(q);
    BigRat scaled = scale2(q, shift);
    if (is_integer(scaled)) return q;
    return scale2(BigRat(floor_of(scaled)), -shift);
}

inline BigRat round_up(const BigRat& q, std::int64_t bits)
{
    if (q == 0) return q;
    std::int64_t shift = bits - 1 - floor_log2(q);
    BigRat scaled = scale2(q, shift);
    if (is_integer(scaled)) return q;
    return scale2(BigRat(ceil_of(scaled)), -shift);
}

class RatBall {
public:
    RatBall() = default;

    /// Point ball.
    RatBall(const BigRat& x) : lo_(x), hi_(x) {}
    RatBall(const BigInt& x) : lo_(x), hi_(x) {}
    RatBall(long x) : lo_(x), hi_(x) {}

    RatBall(const BigRat& lo, const BigRat& hi) : lo_(lo), hi_(hi)
    {
        if (lo_ > hi_) throw domain_error("ball with lo > hi");
    }

    const BigRat& lo() const { return lo_; }
    const BigRat& hi() const { return hi_; }

    bool is_point() const { return lo_ == hi_; }
    BigRat width() const { return hi_ - lo_; }
    BigRat mid() const { return (lo_ + hi_) / 2; }
    /// max |t| over the ball.
    BigRat mag() const { return std::max(BigRat(abs(lo_)), BigRat(abs(hi_))); }

    bool contains(const BigRat& x) const { return lo_ <= x && x <= hi_; }
    bool contains(const RatBall& b) const { return lo_ <= b.lo_ && b.hi_ <= hi_; }
    bool contains_zero() const { return sgn(lo_) <= 0 && sgn(hi_) >= 0; }
    bool overlaps(const RatBall& b) const { return !(hi_ < b.lo_ || b.hi_ < lo_); }

    /// Outward rounding of both ends to `bits` significant bits.
    RatBall rounded(std::int64_t bits) const { return RatBall(round_down(lo_, bits), round_up(hi_, bits)); }

    friend bool operator==(const RatBall& a, const RatBall& b) { return a.lo_ == b.lo_ && a.hi_ == b.hi_; }

    friend std::ostream& operator<<(std::ostream& os, const RatBall& b)
    {
        return os << '[' << b.lo_.get_str() << ", " << b.hi_.get_str() << ']';
    }

private:
    BigRat lo_{0};
    BigRat hi_{0};
};

inline RatBall operator-(const RatBall& a) { return RatBall(-a.hi(), -a.lo()); }

inline RatBall operator+(const RatBall& a, const RatBall& b) { return RatBall(a.lo() + b.lo(), a.hi() + b.hi()); }

inline RatBall operator-(const RatBall& a, const RatBall& b) { return RatBall(a.lo() - b.hi(), a.hi() - b.lo()); }

inline RatBall operator*(const RatBall& a, const RatBall& b)
{
    if (a.is_point() && b.is_point()) return RatBall(BigRat(a.lo() * b.lo()));
    if (sgn(a.lo()) >= 0 && sgn(b.lo()) >= 0) return RatBall(a.lo() * b.lo(), a.hi() * b.hi());
    BigRat p[4] = {a.lo() * b.lo(), a.lo() * b.hi(), a.hi() * b.lo(), a.hi() * b.hi()};
    return RatBall(*std::min_element(p, p + 4), *std::max_element(p, p + 4));
}

inline RatBall reciprocal(const RatBall& a)
{
    if (a.contains_zero()) throw domain_error("division by a ball containing zero");
    return RatBall(1 / a.hi(), 1 / a.lo());
}

inline RatBall operator/(const RatBall& a, const RatBall& b) { return a * reciprocal(b); }

inline RatBall abs(const RatBall& a)
{
    if (sgn(a.lo()) >= 0) return a;
    if (sgn(a.hi()) <= 0) return -a;
    return RatBall(BigRat(0), std::max(BigRat(-a.lo()), a.hi()));
}

/// Smallest ball containing both.
inline RatBall hull(const RatBall& a, const RatBall& b)
{
    return RatBall(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

/// Intersection; both balls must contain the same exact value.
inline RatBall intersect(const RatBall& a, const RatBall& b)
{
    BigRat lo = std::max(a.lo(), b.lo());
    BigRat hi = std::min(a.hi(), b.hi());
    if (lo > hi) throw domain_error("intersecting disjoint enclosures of one value");
    return RatBall(lo, hi);
}

/// x^k for a nonnegative integer k, tight for balls of either sign.
inline RatBall pow(const RatBall& x, unsigned long k)
{
    if (k == 0) return RatBall(1);
    BigRat a = pow_rat(x.lo(), k);
    BigRat b = pow_rat(x.hi(), k);
    if (k % 2 == 1 || sgn(x.lo()) >= 0) return RatBall(std::min(a, b), std::max(a, b));
    if (sgn(x.hi()) <= 0) return RatBall(b, a);
    return RatBall(BigRat(0), std::max(a, b));
}

enum class Order { Less, Greater, Overlap };

inline const char* to_string(Order o)
{
    switch (o) {
    case Order::Less: return "Less";
    case Order::Greater: return "Greater";
    case Order::Overlap: return "Overlap";
    }
    return "?";
}

/// Certified strict comparison of the exact values enclosed by x and y.
inline Order cmp_certified(const RatBall& x, const RatBall& y)
{
    if (x.hi() < y.lo()) return Order::Less;
    if (x.lo() > y.hi()) return Order::Greater;
    return Order::Overlap;
}

} // namespace irrcert
