#pragma once

// Rational approximants p/q from partial sums of sum b_n / a_n, their
// effective exponents kappa = -ln|alpha - p/q| / ln q, window checks of the
// two transcendence criteria, and the counterexample sequence for the
// "for each A > 1" step together with its fixed form.

#include "irrcert/series.hpp"

#include <optional>

namespace irrcert {

struct Kappa {
    RatBall ball;
    bool lower_only = false; // gap.lo = 0: ball.lo is a bound, hi is meaningless
    bool infinite = false;   // gap is exactly 0
    bool defined = true;     // false when the denominator is 1
};

struct Approximant {
    std::int64_t k = 0;
    BigInt p, q;    // partial_sum(k) in lowest terms
    BigInt Q;       // a_1 ... a_k, before reduction
    RatBall gap;    // |alpha - p/q|
    Kappa kappa;    // against q
    Kappa kappa_product; // against Q
};

namespace detail {

/// |sum_{j > k} term_j| with relative width about 2^-rel_bits when the tail is nonzero.
inline TailEnclosure relative_tail(const SeriesInstance& s, std::int64_t k, std::int64_t rel_bits = 64)
{
    Precision p = Precision::bits(64);
    TailEnclosure t = tail_enclosure(s, k, p);
    for (int retry = 0; retry < 6 && t.available(); ++retry) {
        RatBall m = abs(t.ball);
        if (sgn(m.hi()) == 0) break;
        if (sgn(m.lo()) > 0 && m.width() <= scale2(m.hi(), -rel_bits)) break;
        p.target_width = scale2(m.hi(), -rel_bits);
        if (sgn(m.lo()) <= 0) p.target_width = scale2(p.target_width, -64);
        t = tail_enclosure(s, k, p);
    }
    return t;
}

inline Kappa kappa_of(const RatBall& gap, const BigInt& denom, const Precision& prec)
{
    Kappa out;
    if (denom <= 1) {
        out.defined = false;
        return out;
    }
    RatBall lq = ball_ln(RatBall(BigRat(denom)), prec);
    if (sgn(gap.hi()) == 0) {
        out.infinite = true;
        return out;
    }
    if (sgn(gap.lo()) == 0) {
        out.lower_only = true;
        RatBall lg = ball_ln(RatBall(gap.hi()), prec);
        BigRat lo = (-lg).lo() / lq.hi();
        out.ball = RatBall(lo, lo);
        return out;
    }
    out.ball = -ball_ln(gap, prec) / lq;
    return out;
}

} // namespace detail

/// Approximants for k = 1..kmax. Needs a plain series with a ratio fact.
inline std::vector<Approximant> approximants(const SeriesInstance& s, std::int64_t kmax,
                                             const Precision& prec = Precision::bits(64))
{
    if (s.form() != Form::Plain) throw domain_error("approximants need a plain series");
    std::vector<Approximant> out;
    for (std::int64_t k = std::max<std::int64_t>(1, s.first_index()); k <= kmax; ++k) {
        Approximant ap;
        ap.k = k;
        const BigRat& sum = s.partial_sum(k);
        ap.p = sum.get_num();
        ap.q = sum.get_den();
        ap.Q = s.partial_product(k);
        TailEnclosure t = detail::relative_tail(s, k);
        if (!t.available()) throw domain_error("approximants: tail unavailable at k = " + std::to_string(k) + ": " +
                                               t.verdict.reason);
        ap.gap = abs(t.ball);
        ap.kappa = detail::kappa_of(ap.gap, ap.q, prec);
        ap.kappa_product = detail::kappa_of(ap.gap, ap.Q, prec);
        out.push_back(std::move(ap));
    }
    return out;
}

struct HRHypotheses {
    BigRat delta = 1;
    BigRat epsilon = 1;
    std::int64_t t = 1;
    Window window{1, 1};
    Precision prec = Precision::bits(64);
};

struct LimsupEntry {
    std::int64_t k = 0;
    RatBall log_value; // ln of a_{k+1} / ((a_1 ... a_k)^e b_{k+1})
    bool new_max = false;
};

struct LimsupDiagnostic {
    BigRat exponent;
    std::vector<LimsupEntry> entries;
    std::vector<std::int64_t> new_max_at;
    std::string flag;
};

struct HRReport {
    LimsupDiagnostic limsup;
    std::vector<std::pair<std::int64_t, BigRat>> ratios; // (a_{k+1}/a_k)(b_k/b_{k+1}), ratio criterion only
    std::optional<BigRat> window_min;
    std::vector<std::pair<std::int64_t, Order>> root_gaps; // root-gap criterion only
    Verdict positivity, window_check, verdict;
};

namespace detail {

inline RatBall ln_int(const BigInt& x, const Precision& prec) { return ball_ln(RatBall(BigRat(x)), prec); }

inline LimsupDiagnostic limsup_diagnostic(const SeriesInstance& s, const BigRat& e, const Window& w,
                                          const Precision& prec)
{
    LimsupDiagnostic d;
    d.exponent = e;
    RatBall lnprod(0);
    for (std::int64_t k = std::max<std::int64_t>(1, s.first_index()); k < w.from; ++k) lnprod = lnprod + ln_int(s.a_term(k), prec);
    std::optional<BigRat> best;
    for (std::int64_t k = w.from; k <= w.to; ++k) {
        lnprod = lnprod + ln_int(s.a_term(k), prec);
        LimsupEntry en;
        en.k = k;
        en.log_value = ln_int(s.a_term(k + 1), prec) - RatBall(e) * lnprod - ln_int(s.b_term(k + 1), prec);
        if (!best || en.log_value.lo() > *best) {
            en.new_max = true;
            d.new_max_at.push_back(k);
            best = en.log_value.hi();
        }
        d.entries.push_back(en);
    }
    if (d.entries.size() >= 2 &&
        cmp_certified(d.entries.back().log_value, d.entries.front().log_value) == Order::Greater &&
        d.new_max_at.back() == d.entries.back().k)
        d.flag = "new maxima through the window";
    else if (!d.entries.empty())
        d.flag = "no divergence observed";
    return d;
}

inline Verdict positivity(const SeriesInstance& s, const Window& w)
{
    for (std::int64_t k = w.from; k <= w.to + 1; ++k)
        if (s.a().term(k) <= 0 || s.b_term(k) <= 0) return Verdict::refuted_at(k, "a_k, b_k > 0 fails");
    return Verdict::certified("a_k, b_k > 0 on the window");
}

/// ln(1 + e^x) for a ball x.
inline RatBall ln1p_exp(const RatBall& x, const Precision& prec)
{
    if (sgn(x.lo()) >= 0) return x + ball_ln(RatBall(1) + ball_exp(-x, prec), prec);
    if (sgn(x.hi()) <= 0) return ball_ln(RatBall(1) + ball_exp(x, prec), prec);
    return ball_ln(RatBall(1) + ball_exp(x, prec), prec);
}

} // namespace detail

/// Window checks for the criterion with exponent 2 + delta and ratio liminf > 1.
inline HRReport check_hr_thm21(const SeriesInstance& s, const HRHypotheses& h)
{
    if (sgn(h.delta) <= 0) throw domain_error("delta must be positive");
    if (s.form() != Form::Plain) throw domain_error("check_hr_thm21 needs a plain series");
    HRReport r;
    const Window& w = h.window;
    r.positivity = detail::positivity(s, w);
    if (!r.positivity.is_certified()) {
        r.verdict = r.positivity;
        return r;
    }
    r.limsup = detail::limsup_diagnostic(s, 2 + h.delta, w, h.prec);
    r.window_check = Verdict::certified("(a_{k+1}/a_k)(b_k/b_{k+1}) > 1 on the window");
    for (std::int64_t k = w.from; k <= w.to; ++k) {
        BigRat v = make_rat(s.a_term(k + 1) * s.b_term(k), s.a_term(k) * s.b_term(k + 1));
        r.ratios.emplace_back(k, v);
        if (!r.window_min || v < *r.window_min) r.window_min = v;
        if (v <= 1 && r.window_check.is_certified())
            r.window_check = Verdict::refuted_at(k, "ratio <= 1 at k = " + std::to_string(k));
    }
    r.verdict = conjunction({r.positivity, r.window_check});
    r.verdict.assume({"a,b", "limsup a_{k+1}/((a_1...a_k)^(2+delta) b_{k+1}) = infinity", w});
    r.verdict.assume({"a,b", "liminf (a_{k+1}/a_k)(b_k/b_{k+1}) > 1", w});
    return r;
}

inline BigRat thm22_exponent(const BigRat& delta, const BigRat& epsilon) { return 2 + 2 / epsilon + delta; }

/// Window checks for the criterion with exponent 2 + 2/epsilon + delta and the
/// root gap (a_{k+1}/b_{k+1})^(1/(1+eps)) >= (a_k/b_k)^(1/(1+eps)) + 1 for k >= t.
inline HRReport check_hr_thm22(const SeriesInstance& s, const HRHypotheses& h)
{
    if (sgn(h.delta) <= 0 || sgn(h.epsilon) <= 0) throw domain_error("delta and epsilon must be positive");
    if (s.form() != Form::Plain) throw domain_error("check_hr_thm22 needs a plain series");
    HRReport r;
    const Window& w = h.window;
    r.positivity = detail::positivity(s, w);
    if (!r.positivity.is_certified()) {
        r.verdict = r.positivity;
        return r;
    }
    r.limsup = detail::limsup_diagnostic(s, thm22_exponent(h.delta, h.epsilon), w, h.prec);
    r.window_check = Verdict::certified("root gap holds on the window");
    // In logs: (ln x_{k+1} - ln x_k) / (1+eps) >= ln(1 + e^(-v)) with v = ln x_k / (1+eps).
    const RatBall inv(1 / (1 + h.epsilon));
    for (std::int64_t k = std::max(w.from, h.t); k <= w.to; ++k) {
        RatBall lx0 = detail::ln_int(s.a_term(k), h.prec) - detail::ln_int(s.b_term(k), h.prec);
        RatBall lx1 = detail::ln_int(s.a_term(k + 1), h.prec) - detail::ln_int(s.b_term(k + 1), h.prec);
        RatBall v = lx0 * inv;
        RatBall lhs = (lx1 - lx0) * inv;
        RatBall rhs = detail::ln1p_exp(-v, h.prec);
        Order o = cmp_certified(lhs, rhs);
        r.root_gaps.emplace_back(k, o);
        if (!r.window_check.is_certified()) continue;
        if (o == Order::Less)
            r.window_check = Verdict::refuted_at(k, "root gap fails at k = " + std::to_string(k));
        else if (o == Order::Overlap)
            r.window_check = Verdict::inconclusive("root gap balls overlap at k = " + std::to_string(k));
    }
    r.verdict = conjunction({r.positivity, r.window_check});
    r.verdict.assume({"a,b", "limsup a_{k+1}/((a_1...a_k)^(2+2/eps+delta) b_{k+1}) = infinity", w});
    r.verdict.assume({"a,b", "root gap holds for all k beyond the window", w});
    return r;
}

struct TranscendenceReport {
    std::vector<Approximant> approximants;
    std::vector<std::int64_t> exceptional; // kappa.lo > 2
    std::string trend;
    std::string roth_note;
    Verdict verdict;
};

inline constexpr const char* roth_assumption =
    "transcendence rests on Roth's theorem (kappa <= 2 for algebraic irrationals), taken as an unverified assumption";

/// Counts approximations with certified kappa > 2 against the reduced denominator.
inline TranscendenceReport transcendence_report(const SeriesInstance& s, std::int64_t kmax,
                                                const Precision& prec = Precision::bits(64))
{
    TranscendenceReport r;
    r.roth_note = roth_assumption;
    if (kmax < 1) {
        r.verdict = Verdict::inconclusive("empty window");
        return r;
    }
    r.approximants = approximants(s, kmax, prec);
    bool increasing = true;
    std::optional<BigRat> prev;
    for (const auto& ap : r.approximants) {
        const Kappa& kp = ap.kappa;
        if (!kp.defined) continue;
        if (kp.infinite || kp.ball.lo() > 2) r.exceptional.push_back(ap.k);
        if (kp.infinite) continue;
        if (prev && kp.ball.lo() <= *prev) increasing = false;
        prev = kp.ball.hi();
    }
    r.trend = increasing ? "kappa increasing over k" : "kappa not increasing";
    const std::int64_t last = r.approximants.empty() ? 0 : r.approximants.back().k;
    if (!r.exceptional.empty() && r.exceptional.back() == last) {
        r.verdict = Verdict::certified(std::to_string(r.exceptional.size()) + " approximations with kappa > 2");
        r.verdict.assume({"alpha", "kappa > 2 approximations continue beyond the window", Window(1, last)});
        r.verdict.assume({"alpha", roth_assumption, Window(1, last)});
    } else {
        r.verdict = Verdict::inconclusive(r.exceptional.empty() ? "no approximation with kappa > 2"
                                                                : "kappa > 2 does not persist to the end of the window");
    }
    return r;
}

struct CounterexampleReport {
    BigRat delta, A, A_fixed;
    BigInt a1;
    unsigned long exponent = 0; // ceil(2 + delta)
    std::int64_t kmax = 0;
    std::string dsl;
    std::vector<BigInt> terms;              // a_1 .. a_{kmax+1}
    std::vector<std::int64_t> failures;     // a_{k+1} <= A a_k
    std::vector<std::int64_t> fixed_failures; // a_{k+1} < A_fixed a_k
    BigRat min_ratio;                       // min a_{k+1} / a_k on the window
    bool branch_identity = true;
    Verdict original_claim, fixed_claim;
};

inline std::string counterexample_dsl(const BigInt& a1, unsigned long e)
{
    const std::string odd = "(n-1-2*floor_div(n-1, 2))";
    return "t(1) = " + a1.get_str() + "; t(n) = " + odd + " * (n-1) * prodprefix(t, n-1)^" + std::to_string(e) +
           " + (1-" + odd + ") * 2*t(n-1)";
}

/// a_1 = a1, a_{k+1} = k (a_1...a_k)^ceil(2+delta) for odd k, 2 a_k for even k, b_k = 1.
/// The original step claims a_{k+1} > A a_k eventually for every A > 1; the fixed
/// step only needs a_{k+1} >= A_fixed a_k for one A_fixed > 1.
inline CounterexampleReport counterexample_sequence(const BigRat& delta, const BigInt& a1, const BigRat& A,
                                                    std::int64_t kmax, const BigRat& A_fixed = 2)
{
    if (sgn(delta) <= 0) throw domain_error("delta must be positive");
    if (a1 < 2) throw domain_error("a1 must be at least 2");
    if (A <= 1 || A_fixed <= 1) throw domain_error("A must exceed 1");
    if (kmax < 1) throw domain_error("kmax must be at least 1");
    CounterexampleReport r;
    r.delta = delta;
    r.A = A;
    r.A_fixed = A_fixed;
    r.a1 = a1;
    r.kmax = kmax;
    r.exponent = ceil_of(2 + delta).get_ui();
    r.dsl = counterexample_dsl(a1, r.exponent);
    seq::Env env;
    auto& a = env.add(seq::parse_sequence(r.dsl, {}, "a"));
    for (std::int64_t k = 1; k <= kmax + 1; ++k) r.terms.push_back(a.term(k));
    BigInt prod = 1;
    for (std::int64_t k = 1; k <= kmax; ++k) {
        const BigInt& ak = r.terms[static_cast<std::size_t>(k - 1)];
        const BigInt& next = r.terms[static_cast<std::size_t>(k)];
        prod *= ak;
        if (k % 2 == 0) r.branch_identity = r.branch_identity && next == 2 * ak;
        else r.branch_identity = r.branch_identity && next % pow_int(prod, r.exponent) == 0;
        BigRat ratio = make_rat(next, ak);
        if (k == 1 || ratio < r.min_ratio) r.min_ratio = ratio;
        if (ratio <= A) r.failures.push_back(k);
        if (ratio < A_fixed) r.fixed_failures.push_back(k);
    }
    const Window w(1, kmax);
    if (r.failures.empty()) {
        r.original_claim = Verdict::certified("a_{k+1} > A a_k on the window");
        r.original_claim.assume({"a", "a_{k+1} > A a_k beyond the window", w});
    } else {
        r.original_claim = Verdict::refuted_at(r.failures.front(), std::to_string(r.failures.size()) +
                                                                       " indices with a_{k+1} <= A a_k");
    }
    if (r.fixed_failures.empty()) {
        r.fixed_claim = Verdict::certified("a_{k+1} >= A a_k on the window for A = " + A_fixed.get_str());
        r.fixed_claim.assume({"a", "a_{k+1} >= A a_k beyond the window", w});
    } else {
        r.fixed_claim = Verdict::refuted_at(r.fixed_failures.front(), "a_{k+1} < A a_k");
    }
    return r;
}

} // namespace irrcert
