// irrcert: command-line front end. Loads series specs, runs one analysis and
// prints a JSON report. Exit codes: 0 analysis completed (any verdict),
// 1 input error, 2 resource cap hit.

#include "irrcert/irrcert.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <new>
#include <thread>

using namespace irrcert;
using io::json;

namespace {

struct Options {
    std::string spec_file;
    std::string prec;
    std::string output;
    std::int64_t depth = 0;
    std::int64_t from = 0, to = 0;
    std::int64_t Bmax = 64, Nmax = 10, len = 40, rseq_len = 20;
    std::int64_t qmax = 50, nmax = 60;
    unsigned jobs = 1;
    std::string A, delta = "1", epsilon = "1", A_fixed = "2";
    std::int64_t s = 1, t = 1, start = 6, kmax = 6;
    std::int64_t a1 = 2;
    std::int64_t B = 1;
    std::int64_t nmin = 1, pmax = 1;
    std::vector<std::int64_t> Ns;
};

class input_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

BigRat rational_flag(const std::string& name, const std::string& text)
{
    try {
        return parse_rational(text);
    } catch (const std::exception&) {
        throw input_error("--" + name + ": not a rational number: '" + text + "'");
    }
}

/// --prec, else IRRCERT_PREC, else the command default.
Precision resolve_precision(const Options& o, const Precision& fallback)
{
    std::string text = o.prec;
    std::string source = "--prec";
    if (text.empty()) {
        if (const char* env = std::getenv("IRRCERT_PREC"); env && *env) {
            text = env;
            source = "IRRCERT_PREC";
        }
    }
    if (text.empty()) return fallback;
    BigRat w;
    try {
        w = parse_rational(text);
    } catch (const std::exception&) {
        throw input_error(source + ": not a rational number: '" + text + "'");
    }
    if (w <= 0 || w >= 1) throw input_error(source + ": precision width must lie in (0, 1)");
    return Precision::width(w);
}

Window window_flag(const Options& o, std::int64_t from, std::int64_t to)
{
    std::int64_t f = o.from ? o.from : from, t = o.to ? o.to : to;
    if (f > t) throw input_error("--from must not exceed --to");
    return Window(f, t);
}

void require_form(const SeriesInstance& s, Form f, const std::string& command)
{
    if (s.form() != f)
        throw input_error(command + " requires a " + std::string(to_string(f)) + " series (spec has form \"" +
                          to_string(s.form()) + "\")");
}

json spec_input(const io::SeriesSpec& spec, const std::string& file)
{
    return {{"spec_file", file}, {"spec", spec.source}};
}

/// Denominator refutation for q = 1..qmax. Each worker owns its instance.
std::vector<DenominatorRefutation> denominator_sweep(const io::SeriesSpec& spec, std::int64_t qmax, std::int64_t nmax,
                                                     const Precision& prec, unsigned jobs)
{
    std::vector<DenominatorRefutation> out(static_cast<std::size_t>(std::max<std::int64_t>(qmax, 0)));
    if (out.empty()) return out;
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(out.size())));
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&](unsigned id) {
        try {
            SeriesInstance s = io::instantiate(spec);
            for (std::size_t i = id; i < out.size(); i += jobs)
                out[i] = denominator_refutation(s, BigInt(static_cast<long>(i + 1)), nmax, prec);
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < jobs; ++i) pool.emplace_back(worker, i);
    worker(0);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

io::Report cmd_eval(const Options& o)
{
    io::SeriesSpec spec = io::load_spec(o.spec_file);
    SeriesInstance s = io::instantiate(spec);
    io::Report r;
    r.analysis = "eval";
    r.precision = resolve_precision(o, Precision::bits(96));
    r.inputs = spec_input(spec, o.spec_file);
    r.inputs["flags"] = {{"depth", o.depth}};
    ValueEnclosure v = value_enclosure(s, *r.precision, o.depth);
    r.verdict = v.verdict;
    r.values = io::to_json(v);
    r.values["partial_sum_depth"] = v.depth;
    return r;
}

io::Report check_erdos_straus(const Options& o)
{
    io::SeriesSpec spec = io::load_spec(o.spec_file);
    SeriesInstance s = io::instantiate(spec);
    require_form(s, Form::Cantor, "check erdos-straus");
    if (o.Bmax < 1 || o.Nmax < s.first_index() || o.len < 1) throw input_error("need Bmax >= 1, Nmax >= first index, len >= 1");
    io::Report r;
    r.analysis = "check.erdos-straus";
    r.precision = resolve_precision(o, Precision::bits(96));
    r.inputs = spec_input(spec, o.spec_file);
    r.inputs["flags"] = {{"Bmax", o.Bmax}, {"Nmax", o.Nmax}, {"len", o.len}, {"rseq_len", o.rseq_len},
                         {"qmax", o.qmax}, {"nmax", o.nmax}};
    WitnessSearch ws = search_witness(s, o.Bmax, o.Nmax, o.len, o.jobs);
    r.verdict = ws.verdict;
    r.values["search"] = io::to_json(ws);
    r.window = ws.witness ? Window(ws.witness->N, ws.witness->N + ws.witness->len() - 1) : Window(s.first_index(), o.Nmax + o.len - 1);

    BigInt B = ws.witness ? ws.witness->B : BigInt(1);
    std::int64_t N = ws.witness ? ws.witness->N : s.first_index();
    if (o.rseq_len > 0) {
        RSequence rs = r_sequence(s, B, N, o.rseq_len, *r.precision);
        r.values["r_sequence"] = io::to_json(rs);
        r.verdict.assume_all(rs.verdict.assumed);
    } else {
        r.values["r_sequence"] = nullptr;
    }

    json dens = json::array();
    std::int64_t refuted = 0;
    for (const auto& d : denominator_sweep(spec, o.qmax, o.nmax, Precision::bits(64), o.jobs)) {
        dens.push_back(io::to_json(d));
        if (d.verdict.is_refuted()) ++refuted;
        r.verdict.assume_all(d.verdict.assumed);
    }
    r.values["denominators"] = {{"qmax", o.qmax}, {"nmax", o.nmax}, {"refuted_count", refuted}, {"results", dens}};
    r.values["search_bounds_note"] = "B and N bounds are arbitrary; no effective bound is known";
    return r;
}

io::Report check_erdos_straus_cor(const Options& o)
{
    io::SeriesSpec spec = io::load_spec(o.spec_file);
    SeriesInstance s = io::instantiate(spec);
    require_form(s, Form::Cantor, "check erdos-straus-cor");
    io::Report r;
    r.analysis = "check.erdos-straus-cor";
    r.window = window_flag(o, s.first_index(), s.first_index() + 99);
    r.inputs = spec_input(spec, o.spec_file);
    r.inputs["flags"] = {{"from", r.window->from}, {"to", r.window->to}};
    HypothesisReport base = check_thm21_hypotheses(s, *r.window);
    HypothesisReport cor = check_cor210(s, *r.window);
    r.verdict = cor.verdict;
    r.values = {{"criterion", io::to_json(base)}, {"corollary", io::to_json(cor)}};
    return r;
}

io::Report check_prime_series(const Options& o)
{
    io::SeriesSpec spec = io::load_spec(o.spec_file);
    if (spec.form != Form::Cantor)
        throw input_error("check prime-series requires a cantor series (spec has form \"" +
                          std::string(to_string(spec.form)) + "\")");
    if (!std::holds_alternative<seq::Primes>(spec.b.kind))
        throw input_error("check prime-series requires b to be the primes sequence");
    if (o.B < 1) throw input_error("--B must be at least 1");
    io::Report r;
    r.analysis = "check.prime-series";
    r.window = window_flag(o, 1, 1000);
    r.precision = resolve_precision(o, Precision::bits(96));
    r.inputs = spec_input(spec, o.spec_file);
    r.inputs["flags"] = {{"from", r.window->from}, {"to", r.window->to}, {"B", o.B}};
    PrimeSeriesReport p = check_thm31_prime(spec.a, *r.window);
    r.verdict = p.hypotheses.verdict;
    r.verdict.assume_all(p.double_sqrt.verdict.assumed);
    r.values = io::to_json(p);
    LogPowerClaim claim{BigRat(8 * o.B), 1, make_rat(1, 4), make_rat(1, 2)};
    r.values["log_power_crossover"] = io::to_json(log_power_crossover(claim, *r.precision));
    return r;
}

io::Report check_hancl(const Options& o)
{
    io::SeriesSpec spec = io::load_spec(o.spec_file);
    SeriesInstance s = io::instantiate(spec);
    require_form(s, Form::Plain, "check hancl");
    if (!spec.d && o.qmax == 0) throw input_error("check hancl needs a product sequence d or --qmax > 0");
    io::Report r;
    r.analysis = "check.hancl";
    const std::int64_t lo = std::max<std::int64_t>(o.s, s.first_index());
    r.window = window_flag(o, lo, lo + 9);
    r.precision = resolve_precision(o, Precision::bits(128));
    r.inputs = spec_input(spec, o.spec_file);
    r.inputs["flags"] = {{"A", o.A}, {"s", o.s}, {"from", r.window->from}, {"to", r.window->to},
                         {"qmax", o.qmax}, {"nmax", o.nmax}};
    std::vector<Verdict> parts;
    if (spec.d) {
        if (o.A.empty()) throw input_error("check hancl requires --A when the spec has d");
        HanclHypotheses h{rational_flag("A", o.A), o.s, *r.window, *r.precision};
        Thm3Report t = check_hancl_thm3(s, io::product_of(spec), h);
        parts.push_back(t.verdict);
        r.values["criterion"] = io::to_json(t);
    } else {
        r.values["criterion"] = nullptr;
    }
    if (o.qmax > 0) {
        RationalSweep sw = refute_rational_candidates(s, BigInt(static_cast<long>(o.qmax)), o.nmax);
        parts.push_back(sw.verdict);
        r.values["rational_candidates"] = io::to_json(sw);
    } else {
        r.values["rational_candidates"] = nullptr;
    }
    r.verdict = conjunction(parts);
    return r;
}

io::Report check_hancl_cor2_cmd(const Options& o)
{
    io::SeriesSpec spec = io::load_spec(o.spec_file);
    SeriesInstance s = io::instantiate(spec);
    require_form(s, Form::Plain, "check hancl-cor2");
    if (o.A.empty()) throw input_error("check hancl-cor2 requires --A");
    io::Report r;
    r.analysis = "check.hancl-cor2";
    r.window = window_flag(o, o.start, 12);
    r.precision = resolve_precision(o, Precision::bits(128));
    r.inputs = spec_input(spec, o.spec_file);
    r.inputs["flags"] = {{"A", o.A}, {"from", r.window->from}, {"to", r.window->to}, {"start", o.start}};
    Cor2Report c = check_hancl_cor2(s, rational_flag("A", o.A), *r.window, *r.precision, o.start);
    r.verdict = c.verdict;
    r.values = io::to_json(c);
    return r;
}

io::Report check_hancl_rucki(const Options& o, int which)
{
    io::SeriesSpec spec = io::load_spec(o.spec_file);
    SeriesInstance s = io::instantiate(spec);
    const std::string name = which == 1 ? "hancl-rucki-1" : "hancl-rucki-2";
    require_form(s, Form::Plain, "check " + name);
    io::Report r;
    r.analysis = "check." + name;
    r.window = window_flag(o, s.first_index(), std::max(s.first_index(), o.kmax));
    r.precision = resolve_precision(o, Precision::bits(64));
    r.inputs = spec_input(spec, o.spec_file);
    HRHypotheses h;
    h.delta = rational_flag("delta", o.delta);
    h.epsilon = rational_flag("epsilon", o.epsilon);
    h.t = o.t;
    h.window = *r.window;
    h.prec = *r.precision;
    r.inputs["flags"] = {{"delta", o.delta}, {"from", r.window->from}, {"to", r.window->to}, {"kmax", o.kmax}};
    if (which == 2) {
        r.inputs["flags"]["epsilon"] = o.epsilon;
        r.inputs["flags"]["t"] = o.t;
    }
    HRReport hr = which == 1 ? check_hr_thm21(s, h) : check_hr_thm22(s, h);
    r.verdict = hr.verdict;
    r.values["criterion"] = io::to_json(hr);
    r.values["kappa_table"] = io::to_json(transcendence_report(s, o.kmax, *r.precision));
    return r;
}

io::Report cmd_counterexample(const Options& o)
{
    io::Report r;
    r.analysis = "counterexample";
    if (o.A.empty()) throw input_error("counterexample requires --A");
    r.inputs = {{"flags", {{"delta", o.delta}, {"a1", o.a1}, {"A", o.A}, {"A_fixed", o.A_fixed}, {"kmax", o.kmax}}}};
    CounterexampleReport c = counterexample_sequence(rational_flag("delta", o.delta), BigInt(static_cast<long>(o.a1)),
                                                     rational_flag("A", o.A), o.kmax, rational_flag("A-fixed", o.A_fixed));
    r.window = Window(1, o.kmax);
    r.verdict = c.original_claim;
    r.values = io::to_json(c);
    return r;
}

io::Report cmd_primes(const Options& o)
{
    if (o.nmin < 1 || o.pmax < o.nmin) throw input_error("need 1 <= --nmin <= --nmax");
    io::Report r;
    r.analysis = "primes";
    r.window = Window(o.nmin, o.pmax);
    r.precision = resolve_precision(o, Precision{});
    std::vector<std::int64_t> Ns = o.Ns;
    if (Ns.empty()) Ns = o.nmin == o.pmax ? std::vector<std::int64_t>{o.nmin} : std::vector<std::int64_t>{o.nmin, o.pmax};
    r.inputs = {{"flags", {{"nmin", o.nmin}, {"nmax", o.pmax}, {"epsilon", o.epsilon}, {"N", Ns}}}};
    const BigRat eps = rational_flag("epsilon", o.epsilon);
    r.values["ratio_window"] = io::to_json(prime_ratio_window(o.nmin, o.pmax));
    json checks = json::array();
    std::vector<Verdict> verdicts;
    for (std::int64_t N : Ns) {
        if (N < 1) throw input_error("--N must be positive");
        DoubleSqrtReport d = double_sqrt_check(N, eps, *r.precision);
        checks.push_back(io::to_json(d));
        verdicts.push_back(d.verdict);
    }
    r.values["double_sqrt"] = checks;
    r.verdict = conjunction(verdicts);
    return r;
}

io::Report cmd_roth(const Options& o)
{
    io::SeriesSpec spec = io::load_spec(o.spec_file);
    SeriesInstance s = io::instantiate(spec);
    require_form(s, Form::Plain, "roth");
    io::Report r;
    r.analysis = "roth";
    r.precision = resolve_precision(o, Precision::bits(64));
    r.window = Window(1, std::max<std::int64_t>(1, o.kmax));
    r.inputs = spec_input(spec, o.spec_file);
    r.inputs["flags"] = {{"kmax", o.kmax}};
    TranscendenceReport t = transcendence_report(s, o.kmax, *r.precision);
    r.verdict = t.verdict;
    r.values = io::to_json(t);
    return r;
}

void emit(io::Report r, std::chrono::steady_clock::time_point t0, const std::string& output)
{
    r.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    const std::string text = r.to_json().dump(2) + "\n";
    if (output.empty() || output == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(output);
    if (!out) throw input_error("cannot write " + output);
    out << text;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Certified irrationality and transcendence criteria for infinite series"};
    app.set_version_flag("--version", io::report_version);
    app.require_subcommand(1);
    Options o;
    std::function<io::Report()> run;

    auto common = [&](CLI::App* c) {
        c->add_option("--prec", o.prec, "target enclosure width as a rational, e.g. 1e-30 (default: IRRCERT_PREC)");
        c->add_option("-o,--output", o.output, "write the report to a file instead of stdout");
    };
    auto spec_arg = [&](CLI::App* c) { c->add_option("spec", o.spec_file, "series spec file (JSON)")->required(); };
    auto window = [&](CLI::App* c) {
        c->add_option("--from", o.from, "first index of the analysis window");
        c->add_option("--to", o.to, "last index of the analysis window");
    };

    auto* eval = app.add_subcommand("eval", "enclose the value of a series");
    spec_arg(eval);
    common(eval);
    eval->add_option("--depth", o.depth, "sum at least this many terms exactly")->check(CLI::NonNegativeNumber);
    eval->callback([&] { run = [&] { return cmd_eval(o); }; });

    auto* check = app.add_subcommand("check", "check the hypotheses of an irrationality criterion");
    check->require_subcommand(1);

    auto* es = check->add_subcommand("erdos-straus", "rationality witness search, R-sequence and denominator refutation");
    spec_arg(es);
    common(es);
    es->add_option("--Bmax", o.Bmax, "largest B tried")->check(CLI::PositiveNumber);
    es->add_option("--Nmax", o.Nmax, "largest starting index tried");
    es->add_option("--len", o.len, "witness window length")->check(CLI::PositiveNumber);
    es->add_option("--rseq-len", o.rseq_len, "number of R-sequence values (0 skips)")->check(CLI::NonNegativeNumber);
    es->add_option("--qmax", o.qmax, "refute denominators q = 1..qmax (0 skips)")->check(CLI::NonNegativeNumber);
    es->add_option("--nmax", o.nmax, "largest n used for denominator refutation")->check(CLI::PositiveNumber);
    es->add_option("--jobs", o.jobs, "worker threads for the search and the q-sweep")->check(CLI::PositiveNumber);
    es->callback([&] { run = [&] { return check_erdos_straus(o); }; });

    auto* esc = check->add_subcommand("erdos-straus-cor", "window diagnostics for the criterion and its corollary");
    spec_arg(esc);
    common(esc);
    window(esc);
    esc->callback([&] { run = [&] { return check_erdos_straus_cor(o); }; });

    auto* ps = check->add_subcommand("prime-series", "hypotheses for the series with prime numerators");
    spec_arg(ps);
    common(ps);
    window(ps);
    ps->add_option("--B", o.B, "B in the log-power crossover 8 B ln n + 1 < sqrt(n)/4");
    ps->callback([&] { run = [&] { return check_prime_series(o); }; });

    auto* hc = check->add_subcommand("hancl", "root, product and growth hypotheses; rational candidate sweep");
    spec_arg(hc);
    common(hc);
    window(hc);
    hc->add_option("--A", o.A, "bound A on a_n^(1/2^n), required when the spec has d");
    hc->add_option("--s", o.s, "index s from which the hypotheses are required");
    hc->add_option("--qmax", o.qmax, "refute rational candidates with denominator <= qmax (0 skips)")
        ->check(CLI::NonNegativeNumber);
    hc->add_option("--nmax", o.nmax, "largest n used by the candidate sweep")->check(CLI::PositiveNumber);
    hc->callback([&] { run = [&] { return check_hancl(o); }; });

    auto* hc2 = check->add_subcommand("hancl-cor2", "the two inequalities of the doubly exponential corollary");
    spec_arg(hc2);
    common(hc2);
    window(hc2);
    hc2->add_option("--A", o.A, "bound A")->required();
    hc2->add_option("--start", o.start, "index from which the product reduction is used");
    hc2->callback([&] { run = [&] { return check_hancl_cor2_cmd(o); }; });

    auto* hr1 = check->add_subcommand("hancl-rucki-1", "limsup and ratio criterion with a kappa table");
    auto* hr2 = check->add_subcommand("hancl-rucki-2", "limsup and root-gap criterion with a kappa table");
    for (auto* c : {hr1, hr2}) {
        spec_arg(c);
        common(c);
        window(c);
        c->add_option("--delta", o.delta, "delta > 0");
        c->add_option("--kmax", o.kmax, "approximants in the kappa table")->check(CLI::NonNegativeNumber);
    }
    hr2->add_option("--epsilon", o.epsilon, "epsilon > 0");
    hr2->add_option("--t", o.t, "index t from which the root gap is required");
    hr1->callback([&] { run = [&] { return check_hancl_rucki(o, 1); }; });
    hr2->callback([&] { run = [&] { return check_hancl_rucki(o, 2); }; });

    auto* cx = app.add_subcommand("counterexample", "the alternating sequence against the \"for each A > 1\" step");
    common(cx);
    cx->add_option("--delta", o.delta, "delta > 0");
    cx->add_option("--a1", o.a1, "first term, at least 2");
    cx->add_option("--A", o.A, "A > 1 for the original claim")->required();
    cx->add_option("--A-fixed", o.A_fixed, "A > 1 audited for the fixed claim");
    cx->add_option("--kmax", o.kmax, "window [1, kmax]");
    cx->callback([&] { run = [&] { return cmd_counterexample(o); }; });

    auto* pr = app.add_subcommand("primes", "consecutive prime ratios and the doubled-index gap inequality");
    common(pr);
    pr->add_option("--nmin", o.nmin, "first index of the ratio window")->required();
    pr->add_option("--nmax", o.pmax, "last index of the ratio window")->required();
    pr->add_option("--epsilon", o.epsilon, "epsilon > 0 in N^(1/2 + epsilon)");
    pr->add_option("--N", o.Ns, "indices for the gap inequality (default: nmin and nmax)");
    pr->callback([&] { run = [&] { return cmd_primes(o); }; });

    auto* ro = app.add_subcommand("roth", "effective irrationality exponents of the partial sums");
    spec_arg(ro);
    common(ro);
    ro->add_option("--kmax", o.kmax, "number of approximants")->check(CLI::NonNegativeNumber);
    ro->callback([&] { run = [&] { return cmd_roth(o); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    const auto t0 = std::chrono::steady_clock::now();
    try {
        emit(run(), t0, o.output);
    } catch (const resource_error& e) {
        std::cerr << "irrcert: resource cap: " << e.what() << "\n";
        return 2;
    } catch (const std::bad_alloc&) {
        std::cerr << "irrcert: resource cap: out of memory\n";
        return 2;
    } catch (const io::spec_error& e) {
        std::cerr << "irrcert: spec error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "irrcert: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
