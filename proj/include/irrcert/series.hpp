#pragma once

// Series sum b_n / prod_{i<=n} a_i (cantor form) or sum b_n / a_n (plain
// form): exact partial sums and products, tail enclosures licensed by
// declared ratio domination, and refutation of rational values with a given
// denominator.

#include "irrcert/exact/elementary.hpp"
#include "irrcert/seq/facts.hpp"
#include "irrcert/verdict.hpp"

#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace irrcert {

enum class Form { Cantor, Plain };

inline const char* to_string(Form f) { return f == Form::Cantor ? "cantor" : "plain"; }

inline Form parse_form(const std::string& s)
{
    if (s == "cantor") return Form::Cantor;
    if (s == "plain") return Form::Plain;
    throw std::invalid_argument("unknown series form '" + s + "' (expected cantor or plain)");
}

/// Tail enclosure with the audit that licenses it.
struct TailEnclosure {
    std::int64_t from = 0;      // encloses sum_{k > from} term_k
    RatBall ball;               // meaningful only when verdict is certified
    std::int64_t summed_to = 0; // exact terms from+1 .. summed_to, bound beyond
    std::vector<std::string> justification;
    Verdict verdict;
    bool available() const { return verdict.is_certified(); }
};

/// Upper bound on |tail| from one term: |term(n+1)| / (1 - c).
struct TailBound {
    std::int64_t from = 0;
    RatBall bound;
    std::vector<std::string> justification;
    Verdict verdict;
    bool available() const { return verdict.is_certified(); }
};

class SeriesInstance {
public:
    SeriesInstance(seq::SequenceDef a, seq::SequenceDef b, Form form, std::vector<seq::TargetedFact> facts = {},
                   std::map<std::string, BigRat> params = {}, std::vector<seq::SequenceDef> extra = {})
        : env_(std::make_unique<seq::Env>()), form_(form), facts_(std::move(facts))
    {
        for (const auto& [k, v] : params) env_->set_param(k, v);
        a.name = "a";
        b.name = "b";
        for (auto& f : a.facts) facts_.push_back({"a", f});
        for (auto& f : b.facts) facts_.push_back({"b", f});
        for (auto& d : extra) {
            for (auto& f : d.facts) facts_.push_back({d.name, f});
            env_->add(std::move(d));
        }
        if (a.first_index != b.first_index) throw std::invalid_argument("a and b must share the first index");
        a_ = &env_->add(std::move(a));
        b_ = &env_->add(std::move(b));
        for (const auto& f : facts_) seq::validate(f.fact);
    }

    /// Convenience: parse both sequences from DSL text.
    static SeriesInstance parse(const std::string& a, const std::string& b, Form form,
                                std::vector<seq::TargetedFact> facts = {}, std::int64_t first_index = 1)
    {
        seq::SequenceDef da = seq::parse_sequence(a, {}, "a"), db = seq::parse_sequence(b, {}, "b");
        if (!std::holds_alternative<seq::Recurrence>(da.kind)) da.first_index = first_index;
        if (!std::holds_alternative<seq::Recurrence>(db.kind)) db.first_index = first_index;
        return SeriesInstance(std::move(da), std::move(db), form, std::move(facts));
    }

    Form form() const { return form_; }
    const seq::Sequence& a() const { return *a_; }
    const seq::Sequence& b() const { return *b_; }
    seq::Env& env() const { return *env_; }
    std::int64_t first_index() const { return a_->first_index(); }
    const std::vector<seq::TargetedFact>& facts() const { return facts_; }
    void add_fact(seq::TargetedFact f)
    {
        seq::validate(f.fact);
        facts_.push_back(std::move(f));
        audits_.clear();
    }

    /// Last index with a nonzero term for finite (table b) series.
    std::optional<std::int64_t> last_index() const { return b_->last_index(); }

    /// True when b is the literal constant 0.
    bool b_is_zero() const
    {
        const auto* c = std::get_if<seq::ClosedForm>(&b_->def().kind);
        return c && c->expr->kind == seq::Expr::Kind::Int && c->expr->value == 0;
    }

    /// a(n) as an integer, checked to be >= 1.
    BigInt a_term(std::int64_t n) const
    {
        BigInt v = a_->term(n);
        if (v < 1) throw domain_error("a(" + std::to_string(n) + ") = " + v.get_str() + " is not a positive integer");
        return v;
    }

    BigInt b_term(std::int64_t n) const
    {
        if (beyond_end(n)) return 0;
        return b_->term(n);
    }

    bool beyond_end(std::int64_t n) const
    {
        auto last = last_index();
        return last && n > *last;
    }

    /// prod_{i = first .. n} a_i; 1 below the first index.
    BigInt partial_product(std::int64_t n) const
    {
        if (n < first_index()) return 1;
        for (std::int64_t k = std::max(checked_a_ + 1, first_index()); k <= n; ++k) {
            a_term(k);
            checked_a_ = k;
        }
        return a_->prefix_product(n).get_num();
    }

    /// The n-th term of the series.
    BigRat term(std::int64_t n) const
    {
        if (n < first_index()) throw domain_error("series index below the first index");
        if (beyond_end(n) || b_is_zero()) return 0;
        BigInt bn = b_->term(n);
        if (form_ == Form::Cantor) return make_rat(bn, partial_product(n));
        return make_rat(bn, a_term(n));
    }

    /// Exact sum of the terms first .. n.
    BigRat partial_sum(std::int64_t n) const
    {
        if (n < first_index()) return 0;
        auto off = static_cast<std::size_t>(n - first_index());
        while (sums_.size() <= off) {
            std::int64_t k = first_index() + static_cast<std::int64_t>(sums_.size());
            BigRat prev = sums_.empty() ? BigRat(0) : sums_.back();
            sums_.push_back(prev + term(k));
        }
        return sums_[off];
    }

    /// D(n) for the denominator argument: prod_{j <= n} a_j in both forms.
    BigInt denominator_scale(std::int64_t n) const { return partial_product(n); }

    /// The declared ratio domination on the terms, if any (smallest c wins).
    std::optional<std::pair<std::size_t, seq::RatioDominated>> terms_ratio_fact() const
    {
        std::optional<std::pair<std::size_t, seq::RatioDominated>> best;
        for (std::size_t i = 0; i < facts_.size(); ++i) {
            if (facts_[i].target != "terms") continue;
            if (const auto* r = std::get_if<seq::RatioDominated>(&facts_[i].fact))
                if (!best || r->c < best->second.c) best = {i, *r};
        }
        return best;
    }

    /// Audits fact i (any target) on [from, upto]; incremental and cached.
    Verdict audit(std::size_t i, std::int64_t upto) const
    {
        const auto& tf = facts_.at(i);
        auto& st = audits_[i];
        const std::int64_t from = std::max(first_index(), seq::fact_from(tf.fact));
        if (st.failed) return *st.failed;
        if (upto >= from && upto > st.to) {
            Window w(std::max(from, st.to + 1), upto);
            Verdict v = seq::check_fact_on_window(term_source(tf.target), tf.fact, w, env_.get(), tf.target);
            if (!v.is_certified()) {
                st.failed = v;
                return v;
            }
            st.to = upto;
        }
        Verdict ok = Verdict::certified(tf.target + ": " + seq::describe(tf.fact) + " holds on the audited window");
        if (st.to >= from) ok.assume({tf.target, seq::describe(tf.fact) + " beyond the window", Window(from, st.to)});
        return ok;
    }

    /// Values of a named target ("a", "b", "terms" or another sequence).
    seq::TermFn term_source(const std::string& target) const
    {
        if (target == "terms") return [this](std::int64_t n) { return term(n); };
        if (target == "a") return [this](std::int64_t n) { return BigRat(a_->value(n)); };
        if (target == "b") return [this](std::int64_t n) { return beyond_end(n) ? BigRat(0) : BigRat(b_->value(n)); };
        const seq::Sequence& s = env_->at(target);
        return [&s](std::int64_t n) { return BigRat(s.value(n)); };
    }

private:
    struct AuditState {
        std::int64_t to = std::numeric_limits<std::int64_t>::min() / 2;
        std::optional<Verdict> failed;
    };

    std::unique_ptr<seq::Env> env_;
    Form form_;
    std::vector<seq::TargetedFact> facts_;
    const seq::Sequence* a_ = nullptr;
    const seq::Sequence* b_ = nullptr;
    mutable std::int64_t checked_a_ = std::numeric_limits<std::int64_t>::min() / 2;
    mutable std::vector<BigRat> sums_;
    mutable std::map<std::size_t, AuditState> audits_;
};

/// sum_{k > n} term_k enclosed to width * scale <= prec.target_width, by exact
/// lookahead plus the declared ratio bound beyond the lookahead. With
/// `single_term` the bound is applied right after term n+1.
inline TailEnclosure tail_enclosure(const SeriesInstance& s, std::int64_t n, const Precision& prec = {},
                                    const BigRat& scale = 1, bool single_term = false)
{
    TailEnclosure out;
    out.from = n;
    out.summed_to = n;
    if (s.b_is_zero()) {
        out.ball = RatBall(0);
        out.verdict = Verdict::certified("b is identically zero");
        return out;
    }
    if (auto last = s.last_index()) {
        BigRat sum = 0;
        for (std::int64_t k = std::max(n + 1, s.first_index()); k <= *last; ++k) sum += s.term(k);
        out.ball = RatBall(sum);
        out.summed_to = std::max(n, *last);
        out.verdict = Verdict::certified("finite series: terms vanish beyond index " + std::to_string(*last));
        return out;
    }
    auto fact = s.terms_ratio_fact();
    if (!fact) {
        out.verdict = Verdict::inconclusive("no ratio_dominated fact on the terms is declared");
        return out;
    }
    const BigRat c = fact->second.c;
    const std::int64_t N = std::max(fact->second.from, s.first_index());
    std::int64_t m = std::max(n, N - 1);
    BigRat head = 0;
    for (std::int64_t k = n + 1; k <= m; ++k) head += s.term(k);
    const BigRat factor = c / (1 - c);
    RatBall ball;
    for (;;) {
        BigRat t = s.term(m + 1);
        BigRat rem = factor * BigRat(abs(t));
        BigRat centre = head + t;
        ball = RatBall(centre - rem, centre + rem);
        if (single_term || rem == 0 || 2 * rem * scale <= prec.target_width || m - n >= prec.max_work) break;
        // Look one term further, unless that term is too large to build.
        try {
            s.term(m + 2);
        } catch (const resource_error&) {
            break;
        }
        head = centre;
        ++m;
    }
    out.summed_to = m + 1;
    out.ball = ball;
    Verdict v = s.audit(fact->first, m);
    if (!v.is_certified()) {
        out.verdict = Verdict::inconclusive("declared fact does not hold on the window: " + v.reason);
        out.verdict.index = v.index;
        return out;
    }
    out.justification.push_back("terms: " + seq::describe(fact->second));
    out.verdict = Verdict::certified("tail bounded by declared ratio domination");
    out.verdict.assume_all(v.assumed);
    return out;
}

/// |sum_{k > n} term_k| <= |term(n+1)| / (1 - c).
inline TailBound tail_bound(const SeriesInstance& s, std::int64_t n)
{
    TailBound out;
    out.from = n;
    if (s.b_is_zero() || (s.last_index() && n >= *s.last_index())) {
        out.bound = RatBall(0);
        out.verdict = Verdict::certified("tail is identically zero");
        return out;
    }
    auto fact = s.terms_ratio_fact();
    if (!fact) {
        out.verdict = Verdict::inconclusive("no ratio_dominated fact on the terms is declared");
        return out;
    }
    if (fact->second.from > n + 1) {
        out.verdict = Verdict::inconclusive("ratio_dominated starts at " + std::to_string(fact->second.from) +
                                            ", after index " + std::to_string(n + 1));
        return out;
    }
    Verdict v = s.audit(fact->first, n + 1);
    if (!v.is_certified()) {
        out.verdict = Verdict::inconclusive("declared fact does not hold on the window: " + v.reason);
        return out;
    }
    BigRat b = BigRat(abs(s.term(n + 1))) / (1 - fact->second.c);
    out.bound = RatBall(b);
    out.justification.push_back("terms: " + seq::describe(fact->second));
    out.verdict = Verdict::certified("tail bounded by declared ratio domination");
    out.verdict.assume_all(v.assumed);
    return out;
}

struct ValueEnclosure {
    RatBall ball;
    std::int64_t depth = 0;
    std::int64_t summed_to = 0;
    Verdict verdict;
};

/// partial_sum(depth) + tail enclosure at a fixed depth (one bounding term).
inline ValueEnclosure value_enclosure_at(const SeriesInstance& s, std::int64_t depth)
{
    ValueEnclosure out;
    out.depth = depth;
    TailEnclosure t = tail_enclosure(s, depth, {}, 1, true);
    out.verdict = t.verdict;
    out.summed_to = t.summed_to;
    if (t.available()) out.ball = RatBall(s.partial_sum(depth)) + t.ball;
    return out;
}

/// Enclosure of the full sum with width <= prec.target_width, looking ahead
/// from `depth` as far as needed.
inline ValueEnclosure value_enclosure(const SeriesInstance& s, const Precision& prec = {}, std::int64_t depth = 0)
{
    ValueEnclosure out;
    out.depth = std::max(depth, s.first_index());
    TailEnclosure t = tail_enclosure(s, out.depth, prec);
    out.verdict = t.verdict;
    out.summed_to = t.summed_to;
    if (t.available()) {
        out.ball = RatBall(s.partial_sum(out.depth)) + t.ball;
        if (out.ball.width() > prec.target_width)
            out.verdict = Verdict::inconclusive("target width not reached within the lookahead budget");
    }
    return out;
}

struct RatioTestReport {
    BigRat c;
    BigRat dominating; // (1 + c) / 2
    Window window;
    std::vector<BigRat> ratios; // |term(n+1) / term(n)| for n in the window
    Verdict verdict;
};

/// Ratio test with limit c < 1, reduced to domination by (1 + c) / 2, which is
/// audited on the window. Beyond the window the domination is assumed.
inline RatioTestReport ratio_test_tendsto(const seq::TermFn& term, const BigRat& c, const Window& w)
{
    if (c >= 1) throw domain_error("ratio_test_tendsto requires c < 1");
    if (c < 0) throw domain_error("ratio_test_tendsto requires c >= 0");
    RatioTestReport r;
    r.c = c;
    r.dominating = (1 + c) / 2;
    r.window = w;
    for (std::int64_t n = w.from; n <= w.to; ++n) {
        BigRat t = term(n);
        if (t == 0) {
            r.verdict = Verdict::inconclusive("zero term at index " + std::to_string(n) + " where a ratio is needed");
            return r;
        }
        BigRat q = BigRat(abs(term(n + 1))) / BigRat(abs(t));
        r.ratios.push_back(q);
        if (q > r.dominating) {
            r.verdict = Verdict::refuted_at(n, "ratio " + q.get_str() + " exceeds " + r.dominating.get_str());
            return r;
        }
    }
    r.verdict = Verdict::certified("ratios dominated by " + r.dominating.get_str() + " on the window");
    r.verdict.assume({"terms", "ratio_dominated(c=" + r.dominating.get_str() + ") beyond the window", w});
    return r;
}

inline RatioTestReport ratio_test_tendsto(const SeriesInstance& s, const BigRat& c, const Window& w)
{
    return ratio_test_tendsto(s.term_source("terms"), c, w);
}

/// E(n) = q * D(n) * tail(n) enclosed, for the denominator argument.
struct DenominatorCheck {
    std::int64_t n = 0;
    RatBall e;
    Order vs_one = Order::Overlap;
    Verdict tail_verdict;
};

inline DenominatorCheck denominator_quantity(const SeriesInstance& s, const BigInt& q, std::int64_t n,
                                             const Precision& prec = Precision::bits(64))
{
    DenominatorCheck d;
    d.n = n;
    BigRat scale = BigRat(q) * BigRat(s.denominator_scale(n));
    TailEnclosure t = tail_enclosure(s, n, prec, scale);
    d.tail_verdict = t.verdict;
    if (!t.available()) return d;
    d.e = RatBall(scale) * t.ball;
    d.vs_one = cmp_certified(d.e, RatBall(1));
    return d;
}

struct DenominatorRefutation {
    BigInt q;
    std::vector<DenominatorCheck> checks;
    Verdict verdict;
};

/// Certifies that the sum is not a rational with denominator q by finding
/// n <= nmax with 0 < E(n) < 1.
inline DenominatorRefutation denominator_refutation(const SeriesInstance& s, const BigInt& q, std::int64_t nmax,
                                                    const Precision& prec = Precision::bits(64))
{
    if (q < 1) throw domain_error("denominator_refutation requires q >= 1");
    DenominatorRefutation r;
    r.q = q;
    std::vector<AssumedFact> assumed;
    for (std::int64_t n = s.first_index(); n <= nmax; ++n) {
        if (s.b_is_zero() || s.b_term(n) <= 0) {
            if (s.beyond_end(n) || s.b_is_zero()) {
                r.verdict = Verdict::inconclusive("series is finite, so the tail vanishes and E(n) = 0 is no contradiction");
                return r;
            }
            r.verdict = Verdict::inconclusive("b(" + std::to_string(n) + ") <= 0: refutation needs positive b");
            return r;
        }
        DenominatorCheck d = denominator_quantity(s, q, n, prec);
        r.checks.push_back(d);
        if (!d.tail_verdict.is_certified()) {
            r.verdict = Verdict::inconclusive("tail unavailable at n = " + std::to_string(n) + ": " + d.tail_verdict.reason);
            return r;
        }
        for (const auto& f : d.tail_verdict.assumed) assumed.push_back(f);
        if (d.vs_one == Order::Less && sgn(d.e.lo()) > 0) {
            r.verdict = Verdict::refuted_at(n, "0 < E(n) < 1, so the sum is not a rational with denominator " + q.get_str());
            r.verdict.assume_all(d.tail_verdict.assumed);
            return r;
        }
    }
    r.verdict = Verdict::inconclusive("no n <= " + std::to_string(nmax) + " with certified E(n) < 1");
    if (!assumed.empty()) r.verdict.assume(assumed.back());
    return r;
}

} // namespace irrcert
