#pragma once

// Expression trees for integer/rational sequence definitions.

#include "irrcert/exact/bigint.hpp"

#include <memory>
#include <string>
#include <vector>

namespace irrcert::seq {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind {
        Int,   // nonnegative literal
        N,     // the index variable n
        Prev,  // t(n - k)
        Param, // bare identifier, bound at evaluation time
        Call,  // ident(args): builtin or reference to another sequence
        Add,
        Sub,
        Mul,
        Div,
        Pow,
        Fact,
    };

    Kind kind = Kind::Int;
    BigInt value;       // Int
    long offset = 0;    // Prev
    std::string name;   // Param, Call
    std::vector<ExprPtr> args;
    int line = 1, col = 1;
};

inline ExprPtr make_int(const BigInt& v)
{
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Int;
    e->value = v;
    return e;
}

inline ExprPtr make_n()
{
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::N;
    return e;
}

inline ExprPtr make_prev(long k)
{
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Prev;
    e->offset = k;
    return e;
}

inline ExprPtr make_param(std::string name)
{
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Param;
    e->name = std::move(name);
    return e;
}

inline ExprPtr make_call(std::string name, std::vector<ExprPtr> args)
{
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Call;
    e->name = std::move(name);
    e->args = std::move(args);
    return e;
}

inline ExprPtr make_node(Expr::Kind kind, std::vector<ExprPtr> args)
{
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->args = std::move(args);
    return e;
}

/// Structural equality; source positions are ignored.
inline bool same_structure(const Expr& a, const Expr& b)
{
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case Expr::Kind::Int: return a.value == b.value;
    case Expr::Kind::N: return true;
    case Expr::Kind::Prev: return a.offset == b.offset;
    case Expr::Kind::Param: return a.name == b.name;
    default: break;
    }
    if (a.name != b.name || a.args.size() != b.args.size()) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!same_structure(*a.args[i], *b.args[i])) return false;
    return true;
}

/// Fully parenthesized rendering that re-parses to the same tree.
inline std::string print(const Expr& e)
{
    auto wrap = [](const Expr& x) { return "(" + print(x) + ")"; };
    switch (e.kind) {
    case Expr::Kind::Int: return e.value.get_str();
    case Expr::Kind::N: return "n";
    case Expr::Kind::Prev: return "t(n-" + std::to_string(e.offset) + ")";
    case Expr::Kind::Param: return e.name;
    case Expr::Kind::Call: {
        std::string s = e.name + "(";
        for (std::size_t i = 0; i < e.args.size(); ++i) s += (i ? ", " : "") + print(*e.args[i]);
        return s + ")";
    }
    case Expr::Kind::Add: return wrap(*e.args[0]) + " + " + wrap(*e.args[1]);
    case Expr::Kind::Sub: return wrap(*e.args[0]) + " - " + wrap(*e.args[1]);
    case Expr::Kind::Mul: return wrap(*e.args[0]) + " * " + wrap(*e.args[1]);
    case Expr::Kind::Div: return wrap(*e.args[0]) + " / " + wrap(*e.args[1]);
    case Expr::Kind::Pow: return wrap(*e.args[0]) + "^" + wrap(*e.args[1]);
    case Expr::Kind::Fact: return wrap(*e.args[0]) + "!";
    }
    return "?";
}

/// Largest k among t(n-k) references, 0 if none.
inline long max_prev_offset(const Expr& e)
{
    long m = e.kind == Expr::Kind::Prev ? e.offset : 0;
    for (const auto& a : e.args) m = std::max(m, max_prev_offset(*a));
    return m;
}

template <class F>
void visit_calls(const Expr& e, F&& f)
{
    if (e.kind == Expr::Kind::Call || e.kind == Expr::Kind::Param) f(e);
    for (const auto& a : e.args) visit_calls(*a, f);
}

} // namespace irrcert::seq
