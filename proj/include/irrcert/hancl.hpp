#pragma once

// Irrationality of sum b_n / a_n from the growth of a_n^(1/2^n) against
// an auxiliary infinite product prod d_j, plus the ALPHA(n) contradiction
// quantity used to refute rational values with bounded denominator.

#include "irrcert/seq/facts.hpp"
#include "irrcert/series.hpp"

#include <memory>
#include <optional>

namespace irrcert {

/// An auxiliary product sequence d_n > 1 with a log-tail bound.
class ProductSeq {
public:
    explicit ProductSeq(seq::SequenceDef d) : env_(std::make_unique<seq::Env>())
    {
        d.name = "d";
        d_ = &env_->add(std::move(d));
    }

    static ProductSeq parse(const std::string& text, const std::optional<seq::LogTailDominated>& fact = std::nullopt)
    {
        seq::SequenceDef def = seq::parse_sequence(text, {}, "d");
        if (fact) def.facts.emplace_back(*fact);
        return ProductSeq(std::move(def));
    }

    const seq::Sequence& d() const { return *d_; }
    const seq::Env& env() const { return *env_; }
    BigRat value(std::int64_t n) const { return d_->value(n); }
    std::int64_t first_index() const { return d_->first_index(); }
    bool is_table() const { return std::holds_alternative<seq::Table>(d_->def().kind); }

    std::optional<seq::LogTailDominated> log_tail() const
    {
        for (const auto& f : d_->def().facts)
            if (auto* l = std::get_if<seq::LogTailDominated>(&f)) return *l;
        return std::nullopt;
    }

private:
    std::unique_ptr<seq::Env> env_;
    seq::Sequence* d_ = nullptr;
};

struct TailProduct {
    std::int64_t from = 0;
    RatBall ball;                     // encloses prod_{j >= from} d_j
    RatBall nonzero_tail;             // product past the last zero factor
    std::optional<std::int64_t> zero_at; // last zero factor: the product converges to zero
    std::int64_t cut = 0;             // finite product taken over [from, cut]
    Verdict verdict;
    bool available() const { return !verdict.is_inconclusive() && !verdict.is_refuted(); }
};

namespace detail {

inline std::int64_t precision_bits(const Precision& prec)
{
    return std::max<std::int64_t>(64, -floor_log2(prec.target_width) + 32);
}

/// Backward product d_hi * ... * d_lo rounded outward at `bits`.
inline RatBall backward_product(const ProductSeq& p, std::int64_t lo, std::int64_t hi, std::int64_t bits)
{
    RatBall acc(1);
    for (std::int64_t j = hi; j >= lo; --j) acc = (RatBall(p.value(j)) * acc).rounded(bits);
    return acc;
}

} // namespace detail

/// Enclosure of prod_{j >= n} d_j: a finite product up to a cut M times
/// exp([0, C r^(M+1) / (1 - r)]) from the audited log-tail fact.
/// A table d is finite: factors past its end are 1.
inline TailProduct tail_product(const ProductSeq& p, std::int64_t n, const Precision& prec = {})
{
    TailProduct out;
    out.from = n;
    if (n < p.first_index()) throw domain_error("tail_product: n below the first index");
    const std::int64_t bits = detail::precision_bits(prec);

    if (p.is_table()) {
        std::int64_t last = *p.d().last_index();
        BigRat prod = 1;
        for (std::int64_t j = last; j >= n; --j) {
            BigRat v = p.value(j);
            if (sgn(v) == 0) {
                if (!out.zero_at) {
                    out.zero_at = j;
                    out.nonzero_tail = RatBall(prod);
                }
            }
            prod *= v;
        }
        out.cut = std::max(n - 1, last);
        out.ball = RatBall(prod);
        if (!out.zero_at) out.nonzero_tail = out.ball;
        out.verdict = Verdict::certified("finite product of a table sequence");
        if (out.zero_at) out.verdict.reason += "; factor " + std::to_string(*out.zero_at) + " is zero, product converges to zero";
        return out;
    }

    auto fact = p.log_tail();
    if (!fact) {
        out.verdict = Verdict::inconclusive("no log_tail_dominated fact declared for d");
        return out;
    }
    if (sgn(fact->r) <= 0 || fact->r >= 1 || sgn(fact->C) < 0) {
        out.verdict = Verdict::inconclusive("log_tail_dominated needs C >= 0 and 0 < r < 1");
        return out;
    }
    // Cut M independent of n (unless n is past it), so tails at n and n+1 share a cut.
    const BigRat goal = prec.target_width / 16;
    const BigRat q = fact->C / (1 - fact->r);
    std::int64_t M = std::max(fact->from, p.first_index());
    BigRat rm = pow_rat(fact->r, static_cast<unsigned long>(M + 1));
    while (q * rm > goal) {
        ++M;
        rm *= fact->r;
        if (M - fact->from > prec.max_work) throw resource_error("tail_product: cut exceeds the work cap");
    }
    M = std::max(M, n);
    BigRat x = q * pow_rat(fact->r, static_cast<unsigned long>(M + 1));
    out.cut = M;

    Verdict audit = seq::check_fact_on_window(p.d(), *fact, Window(std::max(n, fact->from), M), &p.env());
    if (!audit.is_certified()) {
        out.verdict = Verdict::inconclusive("log-tail fact fails on its audit window: " + audit.reason);
        return out;
    }
    for (std::int64_t j = n; j < std::max(n, fact->from); ++j)
        if (p.value(j) <= 1) {
            out.verdict = Verdict::inconclusive("d_" + std::to_string(j) + " <= 1");
            return out;
        }
    RatBall finite = detail::backward_product(p, n, M, bits);
    RatBall tail = ball_exp(RatBall(0, x), prec.scaled(make_rat(1, 8)));
    out.ball = (finite * tail).rounded(bits);
    out.nonzero_tail = out.ball;
    out.verdict = Verdict::certified("finite product to " + std::to_string(M) + " times exp of the log-tail bound");
    out.verdict.assume_all(audit.assumed);
    return out;
}

struct HanclHypotheses {
    BigRat A;
    std::int64_t s = 1;
    Window window{1, 1};
    Precision prec = Precision::bits(128);
};

struct RootEntry {
    std::int64_t n = 0;
    RatBall root;        // a_n^(1/2^n)
    RatBall gap;         // A - root
    RatBall running_max; // max over [s, n] of the roots
};

struct ProductEntry {
    std::int64_t n = 0;
    RatBall lhs;  // A / a_n^(1/2^n)
    RatBall tail; // prod_{j >= n} d_j
    Order order = Order::Overlap;
};

struct GrowthEntry {
    std::int64_t n = 0;
    RatBall log_ratio; // 2^n ln d_n - ln b_n
};

struct Thm3Report {
    std::vector<RootEntry> roots;
    std::vector<ProductEntry> products;
    std::vector<GrowthEntry> growth;
    std::string growth_flag;
    Verdict positivity, product_check, verdict;
};

namespace detail {

inline RatBall root_2n(const BigInt& a, std::int64_t n, const Precision& prec)
{
    if (n < 0 || n > 62) throw domain_error("a_n^(1/2^n) needs 0 <= n <= 62");
    return ball_root(a, 1UL << n, prec);
}

} // namespace detail

inline Thm3Report check_hancl_thm3(const SeriesInstance& s, const ProductSeq& p, const HanclHypotheses& h)
{
    if (h.A <= 1) throw domain_error("A must exceed 1");
    if (h.s < 1) throw domain_error("s must be positive");
    if (s.form() != Form::Plain) throw domain_error("check_hancl_thm3 needs a plain series");
    Thm3Report r;
    const Window& w = h.window;
    r.positivity = Verdict::certified("a_n, b_n > 0 on the window");
    for (std::int64_t n = w.from; n <= w.to; ++n)
        if (s.a().term(n) <= 0 || s.b_term(n) <= 0) {
            r.positivity = Verdict::refuted_at(n, "a_n, b_n > 0 fails at n = " + std::to_string(n));
            break;
        }
    if (!r.positivity.is_certified()) {
        r.verdict = r.positivity;
        return r;
    }

    const std::int64_t from = std::max(w.from, h.s);
    RatBall best;
    for (std::int64_t n = from; n <= w.to; ++n) {
        RootEntry e;
        e.n = n;
        e.root = detail::root_2n(s.a_term(n), n, h.prec);
        e.gap = RatBall(h.A) - e.root;
        best = n == from ? e.root : RatBall(std::max(best.lo(), e.root.lo()), std::max(best.hi(), e.root.hi()));
        e.running_max = best;
        r.roots.push_back(e);
    }

    r.product_check = Verdict::certified("A / a_n^(1/2^n) > prod_{j>=n} d_j on the window");
    for (const auto& e : r.roots) {
        ProductEntry pe;
        pe.n = e.n;
        pe.lhs = RatBall(h.A) / e.root;
        TailProduct t = tail_product(p, e.n, h.prec);
        if (!t.available()) {
            r.product_check = Verdict::inconclusive("tail product unavailable at n = " + std::to_string(e.n) + ": " +
                                                    t.verdict.reason);
            break;
        }
        pe.tail = t.ball;
        pe.order = cmp_certified(pe.tail, pe.lhs);
        r.products.push_back(pe);
        r.product_check.assume_all(t.verdict.assumed);
        bool fails = pe.order == Order::Greater || (pe.lhs.is_point() && pe.tail.is_point() && pe.lhs == pe.tail);
        if (fails) {
            r.product_check = Verdict::refuted_at(e.n, "A / a_n^(1/2^n) <= tail product at n = " + std::to_string(e.n));
            break;
        }
        if (pe.order == Order::Overlap) {
            r.product_check = Verdict::inconclusive("balls overlap at n = " + std::to_string(e.n));
            break;
        }
    }

    Precision lp = Precision::bits(64);
    for (std::int64_t n = w.from; n <= w.to; ++n) {
        GrowthEntry g;
        g.n = n;
        RatBall ld = ball_ln(RatBall(p.value(n)), lp);
        g.log_ratio = RatBall(BigRat(pow2(n))) * ld - ball_ln(RatBall(BigRat(s.b_term(n))), lp);
        r.growth.push_back(g);
    }
    if (r.growth.size() >= 2) {
        const auto& first = r.growth.front().log_ratio;
        const auto& last = r.growth.back().log_ratio;
        r.growth_flag = cmp_certified(last, first) == Order::Greater ? "increasing over the window"
                                                                      : "no divergence observed";
    }

    r.verdict = conjunction({r.positivity, r.product_check});
    r.verdict.assume({"a", "lim a_n^(1/2^n) = A", w});
    r.verdict.assume({"d,b", "lim d_n^(2^n) / b_n = infinity", w});
    r.verdict.assume({"d", "prod d_j converges", w});
    return r;
}

struct Cor2Entry {
    std::int64_t n = 0;
    RatBall a_side;        // a_n^(1/2^n) (1 + 4 (2/3)^n)
    std::optional<bool> a_ok;
    RatBall b_log2_bound;  // (4/3)^(n-1), the exponent bounding log2 b_n
    std::optional<bool> b_ok;
    RatBall tail;          // prod_{j >= n} (1 + (2/3)^j)
    bool reduction_ok = false; // tail < 1 + 4 (2/3)^n
    RatBall growth_margin;     // 2^n ln(1 + (2/3)^n) - (4/3)^(n-1) ln 2
};

struct Cor2Report {
    BigRat A;
    std::int64_t start = 6;
    std::vector<Cor2Entry> entries;
    Verdict a_bound, b_bound, reduction, verdict;
};

namespace detail {

/// x <= y when certain, false when x > y is certain.
inline std::optional<bool> certify_le(const RatBall& x, const RatBall& y)
{
    if (x.hi() <= y.lo()) return true;
    if (x.lo() > y.hi()) return false;
    return std::nullopt;
}

/// b <= 2^e for rational e >= 0.
inline std::optional<bool> le_pow2(const BigInt& b, const BigRat& e, const Precision& prec)
{
    if (b <= 0) return true;
    const std::int64_t len = bit_length(b); // 2^(len-1) <= b < 2^len
    if (BigRat(len) <= e) return true;
    if (BigRat(len - 1) > e) return false;
    RatBall rhs = ball_powr(RatBall(2), RatBall(e), prec);
    return certify_le(RatBall(BigRat(b)), rhs);
}

inline ProductSeq cor2_d()
{
    return ProductSeq::parse("1 + (2/3)^n", seq::LogTailDominated{1, make_rat(2, 3), 1});
}

} // namespace detail

/// Window checks of a_n^(1/2^n) (1 + 4 (2/3)^n) <= A and b_n <= 2^((4/3)^(n-1))
/// for n >= start, and the reduction to the theorem with d_n = 1 + (2/3)^n.
inline Cor2Report check_hancl_cor2(const SeriesInstance& s, const BigRat& A, const Window& w,
                                   const Precision& prec = Precision::bits(128), std::int64_t start = 6)
{
    if (A <= 1) throw domain_error("A must exceed 1");
    if (s.form() != Form::Plain) throw domain_error("check_hancl_cor2 needs a plain series");
    Cor2Report r;
    r.A = A;
    r.start = start;
    r.a_bound = Verdict::certified("a-bound holds on the window");
    r.b_bound = Verdict::certified("b-bound holds on the window");
    r.reduction = Verdict::certified("tail product < 1 + 4 (2/3)^n on the window");
    const ProductSeq d = detail::cor2_d();
    const std::int64_t from = std::max(w.from, start);
    const BigRat two_thirds = make_rat(2, 3);
    Precision lp = Precision::bits(64);
    auto first_fail = [](Verdict& v, std::int64_t n, const std::string& why) {
        if (v.is_certified()) v = Verdict::refuted_at(n, why + " at n = " + std::to_string(n));
    };
    auto undecided = [](Verdict& v, std::int64_t n) {
        if (v.is_certified()) v = Verdict::inconclusive("balls overlap at n = " + std::to_string(n));
    };
    for (std::int64_t n = from; n <= w.to; ++n) {
        Cor2Entry e;
        e.n = n;
        const BigInt an = s.a().term(n), bn = s.b_term(n);
        if (an <= 0 || bn <= 0) {
            first_fail(r.a_bound, n, "a_n, b_n > 0 fails");
            break;
        }
        BigRat g = pow_rat(two_thirds, static_cast<unsigned long>(n));
        e.a_side = detail::root_2n(an, n, prec) * RatBall(1 + 4 * g);
        e.a_ok = detail::certify_le(e.a_side, RatBall(A));
        if (!e.a_ok) undecided(r.a_bound, n);
        else if (!*e.a_ok) first_fail(r.a_bound, n, "a_n^(1/2^n) (1 + 4 (2/3)^n) > A");

        BigRat ex = pow_rat(make_rat(4, 3), static_cast<unsigned long>(n - 1));
        e.b_log2_bound = RatBall(ex);
        e.b_ok = detail::le_pow2(bn, ex, prec);
        if (!e.b_ok) undecided(r.b_bound, n);
        else if (!*e.b_ok) first_fail(r.b_bound, n, "b_n > 2^((4/3)^(n-1))");

        TailProduct t = tail_product(d, n, prec);
        e.tail = t.ball;
        e.reduction_ok = t.available() && cmp_certified(t.ball, RatBall(1 + 4 * g)) == Order::Less;
        if (!e.reduction_ok) first_fail(r.reduction, n, "tail product >= 1 + 4 (2/3)^n");
        e.growth_margin = RatBall(BigRat(pow2(n))) * ball_ln(RatBall(1 + g), lp) -
                          RatBall(ex) * ball_ln(RatBall(2), lp);
        r.entries.push_back(e);
    }
    r.verdict = conjunction({r.a_bound, r.b_bound, r.reduction});
    r.verdict.assume({"a", "lim a_n^(1/2^n) = A", w});
    r.verdict.assume({"a,b", "both bounds hold for all n >= " + std::to_string(start) + " beyond the window", w});
    return r;
}

/// ALPHA(n) = q * a_1 ... a_n * sum_{j > n} b_j / a_j, a positive integer
/// whenever the sum is p / q and the tail is positive.
inline RatBall alpha_quantity(const SeriesInstance& s, const BigInt& q, std::int64_t n,
                              const Precision& prec = Precision::bits(64), Verdict* status = nullptr)
{
    if (q <= 0) throw domain_error("alpha_quantity requires q > 0");
    if (s.form() != Form::Plain) throw domain_error("alpha_quantity needs a plain series");
    if (s.b_is_zero() || (s.last_index() && n >= *s.last_index())) {
        if (status) *status = Verdict::certified("tail is identically zero");
        return RatBall(0);
    }
    BigRat scale = BigRat(q) * BigRat(s.partial_product(n));
    Precision p = prec;
    TailEnclosure t = tail_enclosure(s, n, p, scale);
    // A positive tail gets a positive lower bound once its first term is summed exactly.
    for (int retry = 0; retry < 4 && t.available() && sgn(t.ball.lo()) <= 0 && !s.b_is_zero() &&
                        !s.last_index() && s.b_term(n + 1) > 0;
         ++retry) {
        p.target_width /= BigRat(pow2(64));
        t = tail_enclosure(s, n, p, scale);
    }
    if (status) *status = t.verdict;
    if (!t.available()) throw domain_error("alpha_quantity: tail unavailable: " + t.verdict.reason);
    return RatBall(scale) * t.ball;
}

struct RefutationRange {
    BigInt q_from, q_to;
    std::int64_t n = 0;
};

struct RationalSweep {
    BigInt Qmax;
    std::int64_t nmax = 0;
    std::vector<RatBall> alpha1;          // ALPHA(n) for q = 1, n = 1..nmax
    std::vector<RefutationRange> refuted; // least refuting n per range of q
    BigInt refuted_count, inconclusive_count;
    std::optional<BigInt> first_inconclusive;
    Verdict verdict;
};

/// For every q <= Qmax, the least n <= nmax with 0 < ALPHA(n) < 1 certified.
/// ALPHA is linear in q, so ALPHA(n) is computed once for q = 1.
inline RationalSweep refute_rational_candidates(const SeriesInstance& s, const BigInt& Qmax, std::int64_t nmax,
                                                const Precision& prec = Precision::bits(64))
{
    RationalSweep out;
    out.Qmax = Qmax;
    out.nmax = nmax;
    out.refuted_count = 0;
    out.inconclusive_count = 0;
    if (Qmax <= 0) {
        out.verdict = Verdict::inconclusive("no candidate denominators");
        return out;
    }
    // limit[n]: largest q refuted at n (0 when none).
    std::vector<BigInt> limit;
    std::vector<AssumedFact> assumed;
    for (std::int64_t n = 1; n <= nmax; ++n) {
        Verdict st;
        RatBall a;
        try {
            a = alpha_quantity(s, 1, n, prec, &st);
        } catch (const domain_error& e) {
            out.verdict = Verdict::inconclusive(e.what());
            return out;
        }
        if (!st.assumed.empty()) assumed = st.assumed;
        out.alpha1.push_back(a);
        BigInt lim = 0;
        if (sgn(a.lo()) > 0) {
            BigRat inv = 1 / a.hi();
            lim = is_integer(inv) ? BigInt(inv.get_num() - 1) : floor_of(inv);
        }
        limit.push_back(lim);
    }
    BigInt covered = 0; // every q <= covered is refuted
    for (std::int64_t n = 1; n <= nmax && covered < Qmax; ++n) {
        const BigInt& lim = limit[static_cast<std::size_t>(n - 1)];
        if (lim > covered) {
            BigInt to = lim < Qmax ? lim : Qmax;
            out.refuted.push_back({covered + 1, to, n});
            covered = to;
        }
    }
    out.refuted_count = covered;
    out.inconclusive_count = Qmax - covered;
    if (covered < Qmax) {
        out.first_inconclusive = covered + 1;
        out.verdict = Verdict::inconclusive("denominators " + BigInt(covered + 1).get_str() + " to " + Qmax.get_str() +
                                            " not refuted with n <= " + std::to_string(nmax));
    } else {
        out.verdict = Verdict::certified("no rational value with denominator <= " + Qmax.get_str());
    }
    out.verdict.assume_all(assumed);
    return out;
}

} // namespace irrcert
