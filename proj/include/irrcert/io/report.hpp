#pragma once

// JSON rendering of analysis results. Every number is an exact string:
// integers in decimal, rationals as "p/q", balls as {"lo", "hi"}.
// Layout is described by docs/report.schema.json.

#include "irrcert/erdos_straus.hpp"
#include "irrcert/exact/crossover.hpp"
#include "irrcert/hancl.hpp"
#include "irrcert/primes.hpp"
#include "irrcert/roth.hpp"
#include "irrcert/series.hpp"

#include <nlohmann/json.hpp>

namespace irrcert::io {

using json = nlohmann::json;

inline constexpr const char* report_version = "0.1.0";

inline json to_json(const BigInt& x) { return x.get_str(10); }
inline json to_json(const BigRat& q) { return to_string(q); }
inline json to_json(const RatBall& b) { return {{"lo", to_string(b.lo())}, {"hi", to_string(b.hi())}}; }
inline json to_json(const Window& w) { return {{"from", w.from}, {"to", w.to}}; }
inline json to_json(const Precision& p) { return {{"target_width", to_string(p.target_width)}, {"max_work", p.max_work}}; }

template <class T>
json opt_json(const std::optional<T>& v)
{
    return v ? json(*v) : json(nullptr);
}

inline json to_json(const Verdict& v)
{
    return {{"status", to_string(v.status)}, {"index", opt_json(v.index)}, {"reason", v.reason}};
}

inline json to_json(const std::vector<AssumedFact>& fs)
{
    json out = json::array();
    for (const auto& f : fs) out.push_back({{"target", f.target}, {"fact", f.fact}, {"audited", to_json(f.audited)}});
    return out;
}

inline json to_json(const std::vector<Verdict>& vs)
{
    json out = json::array();
    for (const auto& v : vs) out.push_back(to_json(v));
    return out;
}

/// The top-level envelope shared by every command.
struct Report {
    std::string analysis;
    json inputs = json::object();
    Verdict verdict;
    std::optional<Window> window;
    std::optional<Precision> precision;
    json values = json::object();
    std::int64_t runtime_ms = 0;

    json to_json() const
    {
        return {{"version", report_version},
                {"analysis", analysis},
                {"inputs", inputs},
                {"verdict", io::to_json(verdict)},
                {"assumed_facts", io::to_json(verdict.assumed)},
                {"window", window ? io::to_json(*window) : json(nullptr)},
                {"precision", precision ? io::to_json(*precision) : json(nullptr)},
                {"values", values},
                {"runtime_ms", runtime_ms}};
    }
};

// series core

inline json to_json(const ValueEnclosure& v)
{
    json out = {{"depth", v.depth}, {"summed_to", v.summed_to}, {"verdict", to_json(v.verdict)}};
    out["enclosure"] = v.verdict.is_certified() ? to_json(v.ball) : json(nullptr);
    out["width"] = v.verdict.is_certified() ? to_json(v.ball.width()) : json(nullptr);
    return out;
}

inline json to_json(const DenominatorRefutation& r)
{
    json out = {{"q", to_json(r.q)}, {"verdict", to_json(r.verdict)}};
    if (r.verdict.is_refuted() && !r.checks.empty()) {
        const auto& d = r.checks.back();
        out["witness"] = {{"n", d.n}, {"E", to_json(d.e)}};
    } else {
        out["witness"] = nullptr;
    }
    return out;
}

// Erdos-Straus

inline json to_json(const ESWitness& w)
{
    json c = json::array();
    for (const auto& x : w.c) c.push_back(to_json(x));
    return {{"B", to_json(w.B)}, {"N", w.N}, {"len", w.len()}, {"c", c}};
}

inline json to_json(const WitnessSearch& s)
{
    return {{"Bmax", to_json(s.Bmax)},
            {"Nmax", s.Nmax},
            {"len", s.len},
            {"candidates", s.candidates},
            {"witness", s.witness ? to_json(*s.witness) : json(nullptr)},
            {"verdict", to_json(s.verdict)}};
}

inline json to_json(const RSequence& r)
{
    json entries = json::array();
    for (const auto& e : r.values) {
        entries.push_back({{"n", e.n},
                           {"R", to_json(e.R)},
                           {"residual", to_json(e.residual)},
                           {"c_minus", to_json(e.c_minus)},
                           {"consistent", e.consistent},
                           {"small", e.small},
                           {"residual_contains_zero", e.residual_ok}});
    }
    return {{"B", to_json(r.B)}, {"N", r.N}, {"entries", entries}, {"small_indices", r.small_indices},
            {"verdict", to_json(r.verdict)}};
}

inline json to_json(const Diagnostic& d)
{
    json vals = json::array();
    for (const auto& [n, v] : d.values) vals.push_back({{"n", n}, {"value", to_json(v)}});
    return {{"name", d.name},
            {"values", vals},
            {"nonincreasing", d.nonincreasing},
            {"decreasing", d.decreasing},
            {"first_increase", opt_json(d.first_increase)},
            {"running_min", d.values.empty() ? json(nullptr) : to_json(d.running_min)},
            {"running_max", d.values.empty() ? json(nullptr) : to_json(d.running_max)},
            {"flag", d.flag}};
}

inline json to_json(const HypothesisReport& r)
{
    json diags = json::array();
    for (const auto& d : r.diagnostics) diags.push_back(to_json(d));
    return {{"analysis", r.analysis}, {"window", to_json(r.window)}, {"diagnostics", diags},
            {"checks", to_json(r.checks)}, {"verdict", to_json(r.verdict)}};
}

// primes

inline json to_json(const PrimeRatioStats& s)
{
    json out = {{"nmin", s.nmin}, {"nmax", s.nmax}, {"empty", s.empty}};
    out["max_ratio"] = s.empty ? json(nullptr) : to_json(s.max_ratio);
    out["argmax"] = s.empty ? json(nullptr) : json(s.argmax);
    out["min_ratio"] = s.empty ? json(nullptr) : to_json(s.min_ratio);
    out["argmin"] = s.empty ? json(nullptr) : json(s.argmin);
    return out;
}

inline json to_json(const DoubleSqrtReport& r)
{
    return {{"N", r.N},
            {"epsilon", to_json(r.epsilon)},
            {"p_N", to_json(r.p_n)},
            {"p_2N", to_json(r.p_2n)},
            {"lhs", to_json(r.lhs)},
            {"rhs", to_json(r.rhs)},
            {"order", to_string(r.order)},
            {"verdict", to_json(r.verdict)}};
}

inline json to_json(const PrimeSeriesReport& r)
{
    return {{"hypotheses", to_json(r.hypotheses)}, {"ratio_window", to_json(r.ratios)},
            {"double_sqrt", to_json(r.double_sqrt)}};
}

inline json to_json(const CrossoverCertificate& c)
{
    return {{"claim", {{"cln", to_json(c.claim.cln)}, {"c0", to_json(c.claim.c0)}, {"cpow", to_json(c.claim.cpow)},
                       {"e", to_json(c.claim.e)}}},
            {"N0", c.n0},
            {"lhs", to_json(c.at_n0.lhs)},
            {"rhs", to_json(c.at_n0.rhs)},
            {"order", to_string(c.at_n0.order)},
            {"derivative_dominated", c.at_n0.derivative_dominated},
            {"verdict", to_json(c.verdict)}};
}

// Hancl

inline json to_json(const Thm3Report& r)
{
    json roots = json::array(), products = json::array(), growth = json::array();
    for (const auto& e : r.roots)
        roots.push_back({{"n", e.n}, {"root", to_json(e.root)}, {"gap", to_json(e.gap)},
                         {"running_max", to_json(e.running_max)}});
    for (const auto& e : r.products)
        products.push_back({{"n", e.n}, {"lhs", to_json(e.lhs)}, {"tail", to_json(e.tail)}, {"order", to_string(e.order)}});
    for (const auto& e : r.growth) growth.push_back({{"n", e.n}, {"log_ratio", to_json(e.log_ratio)}});
    return {{"roots", roots},
            {"products", products},
            {"growth", growth},
            {"growth_flag", r.growth_flag},
            {"positivity", to_json(r.positivity)},
            {"product_check", to_json(r.product_check)},
            {"verdict", to_json(r.verdict)}};
}

inline json opt_bool(const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); }

inline json to_json(const Cor2Report& r)
{
    json entries = json::array();
    for (const auto& e : r.entries)
        entries.push_back({{"n", e.n},
                           {"a_side", to_json(e.a_side)},
                           {"a_ok", opt_bool(e.a_ok)},
                           {"b_log2_bound", to_json(e.b_log2_bound)},
                           {"b_ok", opt_bool(e.b_ok)},
                           {"tail", to_json(e.tail)},
                           {"reduction_ok", e.reduction_ok},
                           {"growth_margin", to_json(e.growth_margin)}});
    return {{"A", to_json(r.A)},
            {"start", r.start},
            {"entries", entries},
            {"a_bound", to_json(r.a_bound)},
            {"b_bound", to_json(r.b_bound)},
            {"reduction", to_json(r.reduction)},
            {"verdict", to_json(r.verdict)}};
}

inline json to_json(const RationalSweep& r)
{
    json alpha = json::array(), ranges = json::array();
    for (std::size_t i = 0; i < r.alpha1.size(); ++i)
        alpha.push_back({{"n", static_cast<std::int64_t>(i) + 1}, {"alpha", to_json(r.alpha1[i])}});
    for (const auto& g : r.refuted) ranges.push_back({{"q_from", to_json(g.q_from)}, {"q_to", to_json(g.q_to)}, {"n", g.n}});
    return {{"Qmax", to_json(r.Qmax)},
            {"nmax", r.nmax},
            {"convention", "ALPHA(n) = q a_1...a_n sum_{k > n} b_k / a_k"},
            {"alpha_q1", alpha},
            {"refuted", ranges},
            {"refuted_count", to_json(r.refuted_count)},
            {"inconclusive_count", to_json(r.inconclusive_count)},
            {"first_inconclusive", r.first_inconclusive ? to_json(*r.first_inconclusive) : json(nullptr)},
            {"verdict", to_json(r.verdict)}};
}

// Hancl-Rucki and Roth

inline json to_json(const Kappa& k)
{
    if (!k.defined) return {{"defined", false}};
    if (k.infinite) return {{"defined", true}, {"infinite", true}};
    json out = {{"defined", true}, {"infinite", false}, {"lower_only", k.lower_only}, {"lo", to_string(k.ball.lo())}};
    out["hi"] = k.lower_only ? json(nullptr) : json(to_string(k.ball.hi()));
    return out;
}

inline json to_json(const Approximant& a)
{
    return {{"k", a.k},        {"p", to_json(a.p)},         {"q", to_json(a.q)},
            {"Q", to_json(a.Q)}, {"gap", to_json(a.gap)},  {"kappa", to_json(a.kappa)},
            {"kappa_product", to_json(a.kappa_product)}};
}

inline json to_json(const HRReport& r)
{
    json entries = json::array(), ratios = json::array(), gaps = json::array();
    for (const auto& e : r.limsup.entries)
        entries.push_back({{"k", e.k}, {"log_value", to_json(e.log_value)}, {"new_max", e.new_max}});
    for (const auto& [k, v] : r.ratios) ratios.push_back({{"k", k}, {"ratio", to_json(v)}});
    for (const auto& [k, o] : r.root_gaps) gaps.push_back({{"k", k}, {"order", to_string(o)}});
    return {{"limsup", {{"exponent", to_json(r.limsup.exponent)}, {"entries", entries},
                        {"new_max_at", r.limsup.new_max_at}, {"flag", r.limsup.flag}}},
            {"ratios", ratios},
            {"window_min", r.window_min ? to_json(*r.window_min) : json(nullptr)},
            {"root_gaps", gaps},
            {"positivity", to_json(r.positivity)},
            {"window_check", to_json(r.window_check)},
            {"verdict", to_json(r.verdict)}};
}

inline json to_json(const TranscendenceReport& r)
{
    json aps = json::array();
    for (const auto& a : r.approximants) aps.push_back(to_json(a));
    return {{"approximants", aps}, {"exceptional", r.exceptional}, {"trend", r.trend},
            {"roth_note", r.roth_note}, {"verdict", to_json(r.verdict)}};
}

inline json to_json(const CounterexampleReport& r)
{
    json terms = json::array();
    for (const auto& t : r.terms) terms.push_back(to_json(t));
    return {{"delta", to_json(r.delta)},
            {"a1", to_json(r.a1)},
            {"A", to_json(r.A)},
            {"A_fixed", to_json(r.A_fixed)},
            {"exponent", r.exponent},
            {"kmax", r.kmax},
            {"dsl", r.dsl},
            {"terms", terms},
            {"failures", r.failures},
            {"fixed_failures", r.fixed_failures},
            {"min_ratio", r.terms.size() >= 2 ? to_json(r.min_ratio) : json(nullptr)},
            {"branch_identity", r.branch_identity},
            {"original_claim", to_json(r.original_claim)},
            {"fixed_claim", to_json(r.fixed_claim)}};
}

} // namespace irrcert::io
