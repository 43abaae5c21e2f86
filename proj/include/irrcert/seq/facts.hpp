#pragma once

// Window audit of declared facts. A fact is checked on the indices of the
// window at or beyond its `from`; everything past the window stays assumed.

#include "irrcert/exact/elementary.hpp"
#include "irrcert/seq/sequence.hpp"
#include "irrcert/verdict.hpp"

#include <functional>
#include <string>

namespace irrcert::seq {

using TermFn = std::function<BigRat(std::int64_t)>;

namespace detail {

// d <= exp(x) decided with balls; nullopt when undecided at this precision.
inline std::optional<bool> le_exp(const BigRat& d, const BigRat& x)
{
    for (std::int64_t bits : {128, 512}) {
        RatBall lo = ball_exp(RatBall(round_down(x, bits)), Precision::bits(bits));
        RatBall hi = ball_exp(RatBall(round_up(x, bits)), Precision::bits(bits));
        if (d <= lo.lo()) return true;
        if (d > hi.hi()) return false;
    }
    return std::nullopt;
}

} // namespace detail

/// Audits `fact` for term(n), n in w with n >= fact.from. `env` resolves
/// names inside eventually_ge bounds.
inline Verdict check_fact_on_window(const TermFn& term, const DeclaredFact& fact, const Window& w,
                                    const Env* env = nullptr, const std::string& target = "t")
{
    validate(fact);
    const std::int64_t from = std::max(w.from, fact_from(fact));
    const std::string what = target + ": " + describe(fact);
    Verdict v = Verdict::certified(what + " holds on the window");
    if (from > w.to) {
        v = Verdict::certified(what + " has no index in the window");
    } else {
        for (std::int64_t n = from; n <= w.to; ++n) {
            bool ok = true;
            std::string why;
            std::visit(
                [&](const auto& f) {
                    using T = std::decay_t<decltype(f)>;
                    BigRat t = term(n);
                    if constexpr (std::is_same_v<T, EventuallyGe>) {
                        BigRat b = eval_expr(*f.bound, Scope{n, env, nullptr});
                        ok = t >= b;
                    } else if constexpr (std::is_same_v<T, EventuallyPositive>) {
                        ok = sgn(t) > 0;
                    } else if constexpr (std::is_same_v<T, MonotoneNondecreasing>) {
                        ok = term(n + 1) >= t;
                    } else if constexpr (std::is_same_v<T, RatioDominated>) {
                        ok = BigRat(abs(term(n + 1))) <= f.c * BigRat(abs(t));
                    } else {
                        if (t < 1) {
                            ok = false;
                        } else {
                            auto r = detail::le_exp(t, f.C * pow_rat(f.r, static_cast<unsigned long>(n)));
                            if (!r) why = "undecided at index " + std::to_string(n);
                            ok = r.value_or(true);
                            if (!r) v = Verdict::inconclusive(what + ": " + why);
                        }
                    }
                },
                fact);
            if (!ok) return Verdict::refuted_at(n, what + " fails at index " + std::to_string(n));
        }
    }
    v.assume({target, describe(fact) + " beyond the window", w});
    return v;
}

inline Verdict check_fact_on_window(const Sequence& s, const DeclaredFact& fact, const Window& w,
                                    const Env* env = nullptr)
{
    return check_fact_on_window([&](std::int64_t n) { return s.value(n); }, fact, w, env, s.name());
}

} // namespace irrcert::seq
