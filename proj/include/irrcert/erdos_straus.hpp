#pragma once

// Rationality witnesses for cantor series sum b_n / (a_1 ... a_n):
// the sum is rational iff some B >= 1 and integers c_n satisfy
//     B b_n = c_n a_n - c_{n+1},   |c_{n+1}| < a_n / 2   for all large n.
// Also the R_n recursion and window diagnostics of the limit hypotheses.

#include "irrcert/primes.hpp"
#include "irrcert/series.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <optional>
#include <thread>
#include <vector>

namespace irrcert {

struct ESWitness {
    BigInt B;
    std::int64_t N = 1;
    std::vector<BigInt> c; // c_N .. c_{N+len}
    std::int64_t len() const { return static_cast<std::int64_t>(c.size()) - 1; }
    const BigInt& at(std::int64_t n) const { return c.at(static_cast<std::size_t>(n - N)); }
};

namespace detail {

/// a and b on [lo, hi] as plain integers (shared read-only by search threads).
struct IntWindow {
    std::int64_t lo = 1;
    std::vector<BigInt> a, b;
    const BigInt& A(std::int64_t n) const { return a[static_cast<std::size_t>(n - lo)]; }
    const BigInt& Bv(std::int64_t n) const { return b[static_cast<std::size_t>(n - lo)]; }
};

inline IntWindow materialize(const SeriesInstance& s, std::int64_t lo, std::int64_t hi)
{
    IntWindow w;
    w.lo = lo;
    for (std::int64_t n = lo; n <= hi; ++n) {
        w.a.push_back(s.a_term(n));
        w.b.push_back(s.b_term(n));
    }
    return w;
}

inline ESWitness construct(const IntWindow& w, const BigInt& B, std::int64_t N, std::int64_t len)
{
    ESWitness out;
    out.B = B;
    out.N = N;
    out.c.reserve(static_cast<std::size_t>(len + 1));
    out.c.push_back(round_half_away(make_rat(B * w.Bv(N), w.A(N))));
    for (std::int64_t n = N; n < N + len; ++n) {
        const BigInt& cn = out.c.back();
        BigInt next = cn * w.A(n) - B * w.Bv(n);
        out.c.push_back(std::move(next));
    }
    return out;
}

/// First index of the window where the witness fails, if any.
inline std::optional<std::int64_t> first_failure(const IntWindow& w, const ESWitness& wit)
{
    for (std::int64_t n = wit.N; n < wit.N + wit.len(); ++n) {
        const BigInt& cn = wit.at(n);
        const BigInt& cn1 = wit.at(n + 1);
        if (wit.B * w.Bv(n) != cn * w.A(n) - cn1) return n;
        if (2 * BigInt(abs(cn1)) >= w.A(n)) return n;
    }
    return std::nullopt;
}

} // namespace detail

/// c_N = round(B b_N / a_N) (ties away from zero), c_{n+1} = c_n a_n - B b_n.
inline ESWitness construct_c(const SeriesInstance& s, const BigInt& B, std::int64_t N, std::int64_t len)
{
    if (B < 1) throw domain_error("construct_c requires B >= 1");
    if (len < 0) throw domain_error("construct_c requires len >= 0");
    if (N < s.first_index()) throw domain_error("construct_c: N below the first index");
    auto w = detail::materialize(s, N, N + std::max<std::int64_t>(len, 1));
    ESWitness out = detail::construct(w, B, N, len);
    for (std::int64_t n = N; n < N + len; ++n)
        if (B * w.Bv(n) - out.at(n) * w.A(n) + out.at(n + 1) != 0) throw std::logic_error("construct_c identity violated");
    return out;
}

/// Re-checks both witness conditions from raw integers on [N, N + len - 1].
inline Verdict verify_witness(const SeriesInstance& s, const ESWitness& wit)
{
    if (wit.c.empty()) return Verdict::inconclusive("empty witness");
    if (wit.B < 1) return Verdict::refuted_at(wit.N, "B must be positive");
    auto w = detail::materialize(s, wit.N, wit.N + std::max<std::int64_t>(wit.len(), 1));
    if (auto bad = detail::first_failure(w, wit)) {
        const BigInt& cn1 = wit.at(*bad + 1);
        std::string why = wit.B * w.Bv(*bad) != wit.at(*bad) * w.A(*bad) - cn1
                              ? "B b_n = c_n a_n - c_{n+1} fails"
                              : "|c_{n+1}| < a_n / 2 fails";
        return Verdict::refuted_at(*bad, why + " at n = " + std::to_string(*bad));
    }
    if (wit.len() == 0) return Verdict::inconclusive("witness window has no index to check");
    Verdict v = Verdict::certified("criterion holds at every index of the window");
    v.assume({"c", "criterion holds for all n beyond the window", Window(wit.N, wit.N + wit.len() - 1)});
    return v;
}

struct WitnessSearch {
    std::optional<ESWitness> witness;
    BigInt Bmax;
    std::int64_t Nmax = 0, len = 0;
    std::int64_t candidates = 0;
    Verdict verdict;
};

/// First (B, N) in lexicographic order whose witness verifies on its window.
/// `jobs` > 1 splits the B range over threads; the result is the same.
inline WitnessSearch search_witness(const SeriesInstance& s, std::int64_t Bmax, std::int64_t Nmax, std::int64_t len,
                                    unsigned jobs = 1)
{
    if (Bmax < 1 || Nmax < 1 || len < 1) throw domain_error("search_witness requires Bmax, Nmax, len >= 1");
    WitnessSearch out;
    out.Bmax = Bmax;
    out.Nmax = Nmax;
    out.len = len;
    const std::int64_t N0 = s.first_index();
    const std::int64_t Nhi = std::max(N0, Nmax);
    const auto w = detail::materialize(s, N0, Nhi + len);

    auto try_b = [&](std::int64_t b) -> std::optional<ESWitness> {
        for (std::int64_t N = N0; N <= Nhi; ++N) {
            ESWitness wit = detail::construct(w, BigInt(static_cast<long>(b)), N, len);
            if (!detail::first_failure(w, wit)) return wit;
        }
        return std::nullopt;
    };

    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(Bmax)));
    std::vector<std::optional<ESWitness>> found(static_cast<std::size_t>(Bmax) + 1);
    std::atomic<std::int64_t> best{Bmax + 1};
    auto worker = [&](unsigned id) {
        for (std::int64_t b = 1 + id; b <= Bmax; b += jobs) {
            if (b > best.load()) break;
            if (auto wit = try_b(b)) {
                found[static_cast<std::size_t>(b)] = std::move(wit);
                std::int64_t cur = best.load();
                while (b < cur && !best.compare_exchange_weak(cur, b)) {
                }
                break;
            }
        }
    };
    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(worker, i);
        for (auto& t : pool) t.join();
    }
    const std::int64_t b = best.load();
    const std::int64_t per_b = Nhi - N0 + 1;
    if (b <= Bmax) {
        out.witness = found[static_cast<std::size_t>(b)];
        out.candidates = (b - 1) * per_b + (out.witness->N - N0 + 1);
        out.verdict = verify_witness(s, *out.witness);
        out.verdict.reason = "witness found at B = " + std::to_string(b) + ", N = " + std::to_string(out.witness->N);
    } else {
        out.candidates = Bmax * per_b;
        out.verdict = Verdict::inconclusive("no witness with B <= " + std::to_string(Bmax) + ", N <= " +
                                            std::to_string(Nhi) + " on windows of length " + std::to_string(len) +
                                            " (not a proof of irrationality)");
    }
    return out;
}

struct RSeqEntry {
    std::int64_t n = 0;
    RatBall R;           // B * a_1 ... a_{n-1} * sum_{k > n} b_k / (a_1 ... a_k)
    RatBall residual;    // R_{n+1} - (a_n R_n - B b_{n+1} / a_{n+1}); set for all but the last
    RatBall c_minus;     // c_n - B b_n / a_n
    bool consistent = false;  // c_minus overlaps R
    bool small = false;       // |R_n| < 1/4 certified
    bool residual_ok = false; // residual contains 0
};

struct RSequence {
    BigInt B;
    std::int64_t N = 1;
    std::vector<RSeqEntry> values;
    std::vector<std::int64_t> small_indices;
    Verdict verdict; // certified iff every residual ball contains 0
};

/// R_n by tail enclosures, checked against R_{n+1} = a_n R_n - B b_{n+1} / a_{n+1}.
inline RSequence r_sequence(const SeriesInstance& s, const BigInt& B, std::int64_t N, std::int64_t len,
                            const Precision& prec = Precision::bits(96))
{
    if (s.form() != Form::Cantor) throw domain_error("r_sequence needs a cantor series");
    if (len < 1) throw domain_error("r_sequence requires len >= 1");
    RSequence out;
    out.B = B;
    out.N = N;
    ESWitness wit = construct_c(s, B, N, len);
    std::vector<AssumedFact> assumed;
    for (std::int64_t n = N; n <= N + len; ++n) {
        BigRat scale = BigRat(B) * BigRat(s.partial_product(n - 1));
        TailEnclosure t = tail_enclosure(s, n, prec, scale);
        if (!t.available()) {
            out.verdict = Verdict::inconclusive("tail unavailable at n = " + std::to_string(n) + ": " + t.verdict.reason);
            return out;
        }
        assumed = t.verdict.assumed;
        RSeqEntry e;
        e.n = n;
        e.R = RatBall(scale) * t.ball;
        e.c_minus = RatBall(BigRat(wit.at(n)) - make_rat(B * s.b_term(n), s.a_term(n)));
        e.consistent = e.c_minus.overlaps(e.R);
        e.small = cmp_certified(abs(e.R), RatBall(make_rat(1, 4))) == Order::Less;
        if (e.small) out.small_indices.push_back(n);
        out.values.push_back(e);
    }
    bool all_ok = true;
    for (std::size_t i = 0; i + 1 < out.values.size(); ++i) {
        auto& e = out.values[i];
        const std::int64_t n = e.n;
        RatBall predicted = RatBall(BigRat(s.a_term(n))) * e.R - RatBall(make_rat(B * s.b_term(n + 1), s.a_term(n + 1)));
        e.residual = out.values[i + 1].R - predicted;
        e.residual_ok = e.residual.contains_zero();
        if (!e.residual_ok && all_ok) {
            all_ok = false;
            out.verdict = Verdict::refuted_at(n, "recursion residual excludes 0");
        }
    }
    if (!out.values.empty()) {
        out.values.back().residual = RatBall(0);
        out.values.back().residual_ok = true;
    }
    if (all_ok) out.verdict = Verdict::certified("recursion residual contains 0 at every index");
    out.verdict.assume_all(assumed);
    return out;
}

/// Per-index exact values with simple trend flags.
struct Diagnostic {
    std::string name;
    std::vector<std::pair<std::int64_t, BigRat>> values;
    bool nonincreasing = true;
    bool decreasing = true;
    std::optional<std::int64_t> first_increase;
    BigRat running_min, running_max;
    std::string flag;

    void push(std::int64_t n, const BigRat& v)
    {
        if (!values.empty()) {
            if (v > values.back().second) nonincreasing = false;
            if (v >= values.back().second) {
                decreasing = false;
                if (!first_increase) first_increase = n;
            }
            running_min = std::min(running_min, v);
            running_max = std::max(running_max, v);
        } else {
            running_min = running_max = v;
        }
        values.emplace_back(n, v);
    }

    /// Maxima over the blocks [2^k, 2^(k+1)) strictly decrease.
    bool block_decreasing() const
    {
        std::vector<BigRat> maxima;
        std::int64_t block = -1;
        for (const auto& [n, v] : values) {
            std::int64_t k = n < 1 ? 0 : std::bit_width(static_cast<std::uint64_t>(n));
            if (k != block) {
                maxima.push_back(v);
                block = k;
            } else {
                maxima.back() = std::max(maxima.back(), v);
            }
        }
        for (std::size_t i = 1; i < maxima.size(); ++i)
            if (maxima[i] >= maxima[i - 1]) return false;
        return maxima.size() >= 2;
    }

    std::string trend() const
    {
        if (decreasing) return "decreasing on the window";
        std::string at = first_increase ? " (first increase at n = " + std::to_string(*first_increase) + ")" : "";
        if (block_decreasing()) return "decreasing trend over dyadic blocks, not monotone" + at;
        return "not decreasing" + at;
    }
};

struct HypothesisReport {
    std::string analysis;
    Window window;
    std::vector<Diagnostic> diagnostics;
    std::vector<Verdict> checks; // window checks; the limits are assumed
    Verdict verdict;
};

namespace detail {

inline Verdict window_check(const std::string& what, const Window& w, const std::function<bool(std::int64_t)>& ok)
{
    for (std::int64_t n = w.from; n <= w.to; ++n)
        if (!ok(n)) return Verdict::refuted_at(n, what + " fails at n = " + std::to_string(n));
    Verdict v = Verdict::certified(what + " holds on the window");
    v.assume({"a,b", what + " for all large n", w});
    return v;
}

inline void finish(HypothesisReport& r, const std::vector<AssumedFact>& limits)
{
    r.verdict = conjunction(r.checks);
    if (r.verdict.is_certified()) r.verdict.reason = "window checks hold; limit hypotheses are assumed";
    r.verdict.assume_all(limits);
}

} // namespace detail

/// a_n > 1 on the window and the per-index values |b_n| / (a_{n-1} a_n).
inline HypothesisReport check_thm21_hypotheses(const SeriesInstance& s, const Window& w)
{
    HypothesisReport r;
    r.analysis = "erdos-straus";
    r.window = w;
    r.checks.push_back(detail::window_check("a_n > 1", w, [&](std::int64_t n) { return s.a_term(n) > 1; }));
    Diagnostic d;
    d.name = "|b_n|/(a_{n-1} a_n)";
    for (std::int64_t n = std::max(w.from, s.first_index() + 1); n <= w.to; ++n)
        d.push(n, make_rat(BigInt(abs(s.b_term(n))), s.a_term(n - 1) * s.a_term(n)));
    if (d.values.size() >= 2 && d.values.back().second >= d.values.front().second) d.flag = "no decay observed";
    else if (d.values.size() >= 2) d.flag = d.trend();
    r.diagnostics.push_back(d);
    detail::finish(r, {{"a,b", "lim |b_n|/(a_{n-1} a_n) = 0", w}});
    return r;
}

/// Window diagnostics for the four extra hypotheses of the corollary.
inline HypothesisReport check_cor210(const SeriesInstance& s, const Window& w)
{
    HypothesisReport r = check_thm21_hypotheses(s, w);
    r.analysis = "erdos-straus-cor";
    r.checks.push_back(detail::window_check("b_n > 0", w, [&](std::int64_t n) { return s.b_term(n) > 0; }));
    r.checks.push_back(detail::window_check("a_{n+1} >= a_n", w, [&](std::int64_t n) {
        return s.a_term(n + 1) >= s.a_term(n);
    }));
    Diagnostic diff, ratio;
    diff.name = "(b_{n+1}-b_n)/a_n";
    ratio.name = "a_n/b_n";
    int positive = 0;
    for (std::int64_t n = w.from; n <= w.to; ++n) {
        BigRat v = make_rat(s.b_term(n + 1) - s.b_term(n), s.a_term(n));
        if (sgn(v) > 0) ++positive;
        diff.push(n, v);
        BigInt bn = s.b_term(n);
        if (bn != 0) ratio.push(n, make_rat(s.a_term(n), bn));
    }
    diff.flag = std::to_string(positive) + " positive of " + std::to_string(diff.values.size());
    if (!ratio.values.empty())
        ratio.flag = "running min " + ratio.running_min.get_str() +
                     (ratio.values.back().second < ratio.values.front().second ? ", decreasing trend" : ", no decrease observed");
    r.diagnostics.push_back(diff);
    r.diagnostics.push_back(ratio);
    r.verdict = Verdict::inconclusive("limits cannot be decided on a finite window");
    Verdict c = conjunction(r.checks);
    if (c.is_refuted()) r.verdict = c;
    r.verdict.assume_all(c.assumed);
    r.verdict.assume({"a,b", "lim |b_n|/(a_{n-1} a_n) = 0", w});
    r.verdict.assume({"a,b", "lim (b_{n+1}-b_n)/a_n <= 0", w});
    r.verdict.assume({"a,b", "liminf a_n/b_n = 0", w});
    return r;
}

struct PrimeSeriesReport {
    HypothesisReport hypotheses;
    PrimeRatioStats ratios;
    DoubleSqrtReport double_sqrt;
};

/// The cantor series sum p_n / (a_1 ... a_n) with p_n the n-th prime:
/// per-index p_n / a_n^2 and a_n / p_n, plus the prime-gap checks.
inline PrimeSeriesReport check_thm31_prime(const seq::SequenceDef& a, const Window& w,
                                           PrimeCache& cache = PrimeCache::global())
{
    seq::SequenceDef b = seq::parse_sequence("nth_prime(n)", {}, "b");
    b.first_index = a.first_index;
    SeriesInstance s(a, b, Form::Cantor);
    s.env().use_primes(cache);
    PrimeSeriesReport out;
    HypothesisReport& r = out.hypotheses;
    r.analysis = "prime-series";
    r.window = w;
    r.checks.push_back(detail::window_check("a_n >= 1", w, [&](std::int64_t n) { return s.a().term(n) >= 1; }));
    if (r.checks.back().is_certified())
        r.checks.push_back(detail::window_check("a_{n+1} >= a_n", w, [&](std::int64_t n) {
            return s.a_term(n + 1) >= s.a_term(n);
        }));
    Diagnostic sq, lin;
    sq.name = "p_n/a_n^2";
    lin.name = "a_n/p_n";
    if (r.checks.back().is_certified()) {
        for (std::int64_t n = w.from; n <= w.to; ++n) {
            BigInt an = s.a_term(n), pn = s.b_term(n);
            sq.push(n, make_rat(pn, an * an));
            lin.push(n, make_rat(an, pn));
        }
        sq.flag = sq.trend();
        if (lin.running_min == lin.running_max)
            lin.flag = "constant " + lin.running_min.get_str() + ": no approach to 0";
        else
            lin.flag = "running min " + lin.running_min.get_str();
    }
    r.diagnostics.push_back(sq);
    r.diagnostics.push_back(lin);
    detail::finish(r, {{"a", "lim p_n/a_n^2 = 0", w}, {"a", "liminf a_n/p_n = 0", w}});
    out.ratios = prime_ratio_window(std::max<std::int64_t>(w.from, 1), std::max<std::int64_t>(w.to, 1), cache);
    out.double_sqrt = double_sqrt_check(std::max<std::int64_t>(w.to, 1), make_rat(1, 2), {}, cache);
    return out;
}

} // namespace irrcert
