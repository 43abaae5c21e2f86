#pragma once

// Memoized evaluation of sequence definitions.
//
// An Env owns a set of named sequences and parameters. Sequences may refer to
// each other by name (`a(n-1)`), to parameters (`B`), and to builtins. Each
// Sequence keeps its own memo; a Sequence (and therefore an Env) is
// single-writer, distinct Envs can be used from different threads.

#include "irrcert/primes.hpp"
#include "irrcert/seq/parser.hpp"

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace irrcert::seq {

class eval_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Env;

/// Bit budget for any single intermediate value.
constexpr std::int64_t max_value_bits = std::int64_t{1} << 26;

class Sequence {
public:
    Sequence(SequenceDef def, const Env* env) : def_(std::move(def)), env_(env) {}

    const SequenceDef& def() const { return def_; }
    const std::string& name() const { return def_.name; }
    std::int64_t first_index() const { return def_.first_index; }

    /// Exact value at n (rational-valued sequences are allowed).
    const BigRat& value(std::int64_t n) const;

    /// Integer value at n; a non-integral value is an evaluation error.
    BigInt term(std::int64_t n) const
    {
        const BigRat& v = value(n);
        if (!is_integer(v))
            throw eval_error(name() + "(" + std::to_string(n) + ") = " + v.get_str() + " is not an integer");
        return v.get_num();
    }

    /// prod_{i = first_index .. n} value(i); 1 for n < first_index.
    const BigRat& prefix_product(std::int64_t n) const;

    /// Highest index with a value bound (table sequences); nullopt if unbounded.
    std::optional<std::int64_t> last_index() const
    {
        if (const auto* t = std::get_if<Table>(&def_.kind))
            return def_.first_index + static_cast<std::int64_t>(t->values.size()) - 1;
        return std::nullopt;
    }

private:
    BigRat compute(std::int64_t n) const;

    SequenceDef def_;
    const Env* env_;
    mutable std::vector<BigRat> dense_; // recurrence memo, contiguous from first_index
    mutable std::unordered_map<std::int64_t, BigRat> sparse_;
    mutable std::vector<BigRat> products_;
};

class Env {
public:
    Env() = default;
    Env(const Env&) = delete;
    Env& operator=(const Env&) = delete;

    Sequence& add(SequenceDef def)
    {
        std::string name = def.name;
        auto s = std::make_unique<Sequence>(std::move(def), this);
        auto& slot = seqs_[name];
        slot = std::move(s);
        return *slot;
    }

    void set_param(const std::string& name, const BigRat& v) { params_[name] = v; }

    const Sequence* find(const std::string& name) const
    {
        auto it = seqs_.find(name);
        return it == seqs_.end() ? nullptr : it->second.get();
    }

    const Sequence& at(const std::string& name) const
    {
        const Sequence* s = find(name);
        if (!s) throw eval_error("unknown sequence '" + name + "'");
        return *s;
    }

    std::optional<BigRat> param(const std::string& name) const
    {
        auto it = params_.find(name);
        if (it == params_.end()) return std::nullopt;
        return it->second;
    }

    PrimeCache& primes() const { return *primes_; }
    void use_primes(PrimeCache& cache) { primes_ = &cache; }

    /// Names known to this environment, for strict parsing.
    ParseContext parse_context() const
    {
        std::set<std::string> s, p;
        for (const auto& [k, v] : seqs_) s.insert(k);
        for (const auto& [k, v] : params_) p.insert(k);
        return ParseContext::strict(std::move(s), std::move(p));
    }

    int& depth() const { return depth_; }

private:
    std::map<std::string, std::unique_ptr<Sequence>> seqs_;
    std::map<std::string, BigRat> params_;
    PrimeCache* primes_ = &PrimeCache::global();
    mutable int depth_ = 0;
};

/// What an expression can see while being evaluated.
struct Scope {
    std::int64_t n = 0;
    const Env* env = nullptr;
    const Sequence* self = nullptr; // for t(n-k) and prodprefix(t, .)
};

namespace detail {

inline std::string where(const Expr& e) { return std::to_string(e.line) + ":" + std::to_string(e.col) + ": "; }

inline std::int64_t to_index(const BigRat& v, const Expr& e, const char* what)
{
    if (!is_integer(v) || !v.get_num().fits_slong_p())
        throw eval_error(where(e) + what + " must be an integer index, got " + v.get_str());
    return v.get_num().get_si();
}

inline std::int64_t approx_bits(const BigRat& v) { return bit_length(v.get_num()) + bit_length(v.get_den()); }

} // namespace detail

inline BigRat eval_expr(const Expr& e, const Scope& sc)
{
    using K = Expr::Kind;
    switch (e.kind) {
    case K::Int: return BigRat(e.value);
    case K::N: return BigRat(BigInt(static_cast<long>(sc.n)));
    case K::Prev: {
        if (!sc.self) throw eval_error(detail::where(e) + "t(n-k) outside a recurrence");
        return sc.self->value(sc.n - e.offset);
    }
    case K::Param: {
        if (sc.env)
            if (auto v = sc.env->param(e.name)) return *v;
        throw eval_error(detail::where(e) + "unknown identifier '" + e.name + "'");
    }
    case K::Add: return eval_expr(*e.args[0], sc) + eval_expr(*e.args[1], sc);
    case K::Sub: return eval_expr(*e.args[0], sc) - eval_expr(*e.args[1], sc);
    case K::Mul: {
        BigRat a = eval_expr(*e.args[0], sc);
        BigRat b = eval_expr(*e.args[1], sc);
        if (detail::approx_bits(a) + detail::approx_bits(b) > max_value_bits)
            throw resource_error(detail::where(e) + "product exceeds the value size cap");
        return a * b;
    }
    case K::Div: {
        BigRat d = eval_expr(*e.args[1], sc);
        if (d == 0) throw eval_error(detail::where(e) + "division by zero");
        return eval_expr(*e.args[0], sc) / d;
    }
    case K::Pow: {
        BigRat base = eval_expr(*e.args[0], sc);
        BigRat ex = eval_expr(*e.args[1], sc);
        if (!is_integer(ex) || sgn(ex) < 0)
            throw eval_error(detail::where(e) + "exponent must be a nonnegative integer, got " + ex.get_str());
        if (base == 0 || base == 1 || base == -1) {
            if (ex == 0) return BigRat(1);
            if (base == -1) return mpz_odd_p(ex.get_num_mpz_t()) ? BigRat(-1) : BigRat(1);
            return base;
        }
        if (!ex.get_num().fits_ulong_p() ||
            static_cast<double>(detail::approx_bits(base)) * ex.get_d() > static_cast<double>(max_value_bits))
            throw resource_error(detail::where(e) + "power exceeds the value size cap");
        return pow_rat(base, ex.get_num().get_ui());
    }
    case K::Fact: {
        BigRat v = eval_expr(*e.args[0], sc);
        if (!is_integer(v) || sgn(v) < 0) throw eval_error(detail::where(e) + "factorial of " + v.get_str());
        if (v > 2'000'000) throw resource_error(detail::where(e) + "factorial argument too large");
        return BigRat(factorial(v.get_num().get_ui()));
    }
    case K::Call: break;
    }

    const std::string& f = e.name;
    if (f == "nth_prime") {
        std::int64_t k = detail::to_index(eval_expr(*e.args[0], sc), e, "nth_prime argument");
        if (k < 1) throw eval_error(detail::where(e) + "nth_prime argument must be >= 1");
        PrimeCache& cache = sc.env ? sc.env->primes() : PrimeCache::global();
        return BigRat(nth_prime(k, cache));
    }
    if (f == "floor_div") {
        BigRat a = eval_expr(*e.args[0], sc);
        BigRat b = eval_expr(*e.args[1], sc);
        if (b == 0) throw eval_error(detail::where(e) + "floor_div by zero");
        return BigRat(floor_of(a / b));
    }
    if (f == "ceil") return BigRat(ceil_of(eval_expr(*e.args[0], sc)));
    if (f == "round") return BigRat(round_half_away(eval_expr(*e.args[0], sc)));
    if (f == "prodprefix") {
        const std::string& target = e.args[0]->name;
        std::int64_t upto = detail::to_index(eval_expr(*e.args[1], sc), e, "prodprefix bound");
        const Sequence* s = nullptr;
        if (target == "t" || (sc.self && target == sc.self->name())) {
            s = sc.self;
            if (s && upto >= sc.n) throw eval_error(detail::where(e) + "prodprefix of the sequence itself must stop before n");
        } else if (sc.env) {
            s = sc.env->find(target);
        }
        if (!s) throw eval_error(detail::where(e) + "unknown sequence '" + target + "'");
        return s->prefix_product(upto);
    }
    // Reference to another sequence.
    if (!sc.env || !sc.env->find(f)) throw eval_error(detail::where(e) + "unknown identifier '" + f + "'");
    std::int64_t k = detail::to_index(eval_expr(*e.args[0], sc), e, "sequence argument");
    return sc.env->at(f).value(k);
}

inline const BigRat& Sequence::value(std::int64_t n) const
{
    if (n < def_.first_index)
        throw eval_error(name() + ": index " + std::to_string(n) + " is below the first index " +
                         std::to_string(def_.first_index));
    if (const auto* t = std::get_if<Table>(&def_.kind)) {
        auto off = static_cast<std::size_t>(n - def_.first_index);
        if (off >= t->values.size())
            throw eval_error(name() + ": index " + std::to_string(n) + " is beyond the table (last index " +
                             std::to_string(*last_index()) + ")");
        return t->values[off];
    }
    if (std::holds_alternative<Recurrence>(def_.kind)) {
        auto off = static_cast<std::size_t>(n - def_.first_index);
        while (dense_.size() <= off) {
            std::int64_t k = def_.first_index + static_cast<std::int64_t>(dense_.size());
            dense_.push_back(compute(k));
        }
        return dense_[off];
    }
    auto it = sparse_.find(n);
    if (it != sparse_.end()) return it->second;
    BigRat v = compute(n);
    return sparse_.emplace(n, std::move(v)).first->second;
}

inline BigRat Sequence::compute(std::int64_t n) const
{
    struct DepthGuard {
        explicit DepthGuard(const Env* env) : env_(env)
        {
            if (env_ && ++env_->depth() > 64) {
                --env_->depth();
                throw eval_error("sequence references nest too deeply (cyclic definition?)");
            }
        }
        ~DepthGuard()
        {
            if (env_) --env_->depth();
        }
        const Env* env_;
    } guard(env_);

    Scope sc{n, env_, this};
    if (const auto* c = std::get_if<ClosedForm>(&def_.kind)) return eval_expr(*c->expr, sc);
    if (std::holds_alternative<Primes>(def_.kind)) {
        PrimeCache& cache = env_ ? env_->primes() : PrimeCache::global();
        return BigRat(nth_prime(n - def_.first_index + 1, cache));
    }
    const auto& r = std::get<Recurrence>(def_.kind);
    auto off = static_cast<std::size_t>(n - def_.first_index);
    if (off < r.base.size()) return eval_expr(*r.base[off], Scope{n, env_, nullptr});
    return eval_expr(*r.step, sc);
}

inline const BigRat& Sequence::prefix_product(std::int64_t n) const
{
    static const BigRat one(1);
    if (n < def_.first_index) return one;
    auto off = static_cast<std::size_t>(n - def_.first_index);
    while (products_.size() <= off) {
        std::int64_t k = def_.first_index + static_cast<std::int64_t>(products_.size());
        BigRat prev = products_.empty() ? BigRat(1) : products_.back();
        const BigRat& v = value(k);
        if (detail::approx_bits(prev) + detail::approx_bits(v) > max_value_bits)
            throw resource_error(name() + ": prefix product exceeds the value size cap");
        products_.push_back(prev * v);
    }
    return products_[off];
}

/// Standalone evaluation of one definition (no cross references).
inline BigInt eval_term(const SequenceDef& def, std::int64_t n)
{
    Env env;
    return env.add(def).term(n);
}

} // namespace irrcert::seq
