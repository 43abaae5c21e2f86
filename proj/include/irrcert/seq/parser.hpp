#pragma once

// Recursive-descent parser for the sequence language.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ('^' atom)? ('!')?
//   atom   := INT | 'n' | 't' '(' 'n' '-' INT ')' | ident '(' args ')' | '(' expr ')' | ident
//
// A definition is either one expression (closed form) or a ';'-separated
// list of base statements `t(INT) = expr` followed by one step statement
// `t(n) = expr` (recurrence). The expression `nth_prime(n)` on its own
// defines the primes kind.

#include "irrcert/seq/def.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace irrcert::seq {

class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& msg, int line, int col)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg), line_(line), col_(col)
    {
    }
    int line() const { return line_; }
    int col() const { return col_; }

private:
    int line_, col_;
};

/// Builtin name -> arity.
inline const std::map<std::string, std::size_t>& builtins()
{
    static const std::map<std::string, std::size_t> table = {
        {"nth_prime", 1}, {"floor_div", 2}, {"ceil", 1}, {"round", 1}, {"prodprefix", 2},
    };
    return table;
}

/// Names the parser may resolve. A disengaged set accepts any name
/// (resolution is then deferred to evaluation).
struct ParseContext {
    std::optional<std::set<std::string>> sequences;
    std::optional<std::set<std::string>> params;

    static ParseContext strict(std::set<std::string> seqs, std::set<std::string> ps = {})
    {
        return ParseContext{std::move(seqs), std::move(ps)};
    }
};

namespace detail {

struct Token {
    enum class Kind { Int, Ident, Sym, End } kind = Kind::End;
    std::string text;
    int line = 1, col = 1;
};

inline std::vector<Token> tokenize(std::string_view src)
{
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t k) {
        for (std::size_t j = 0; j < k; ++j, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        unsigned char c = static_cast<unsigned char>(src[i]);
        if (std::isspace(c)) {
            advance(1);
            continue;
        }
        Token t;
        t.line = line;
        t.col = col;
        std::size_t j = i;
        if (std::isdigit(c)) {
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            t.kind = Token::Kind::Int;
        } else if (std::isalpha(c) || c == '_') {
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            t.kind = Token::Kind::Ident;
        } else if (std::string_view("+-*/^!(),=;").find(static_cast<char>(c)) != std::string_view::npos) {
            j = i + 1;
            t.kind = Token::Kind::Sym;
        } else {
            throw parse_error(std::string("unexpected character '") + static_cast<char>(c) + "'", line, col);
        }
        t.text = std::string(src.substr(i, j - i));
        advance(j - i);
        out.push_back(std::move(t));
    }
    Token end;
    end.kind = Token::Kind::End;
    end.line = line;
    end.col = col;
    out.push_back(end);
    return out;
}

class Parser {
public:
    Parser(std::vector<Token> toks, const ParseContext& ctx) : toks_(std::move(toks)), ctx_(ctx) {}

    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool at_end() const { return peek().kind == Token::Kind::End; }
    bool is_sym(const char* s, std::size_t k = 0) const
    {
        return peek(k).kind == Token::Kind::Sym && peek(k).text == s;
    }
    bool is_ident(const char* s, std::size_t k = 0) const
    {
        return peek(k).kind == Token::Kind::Ident && peek(k).text == s;
    }

    [[noreturn]] void fail(const std::string& msg, const Token& at) const { throw parse_error(msg, at.line, at.col); }

    void expect_sym(const char* s)
    {
        if (!is_sym(s)) fail(std::string("expected '") + s + "'" + found(), peek());
        ++pos_;
    }

    std::string found() const
    {
        if (at_end()) return " but found end of input";
        return " but found '" + peek().text + "'";
    }

    ExprPtr expr()
    {
        Guard g(*this);
        ExprPtr lhs = term();
        while (is_sym("+") || is_sym("-")) {
            const Token& op = peek();
            auto kind = op.text == "+" ? Expr::Kind::Add : Expr::Kind::Sub;
            ++pos_;
            lhs = located(make_node(kind, {lhs, term()}), op);
        }
        return lhs;
    }

    ExprPtr term()
    {
        ExprPtr lhs = factor();
        while (is_sym("*") || is_sym("/")) {
            const Token& op = peek();
            auto kind = op.text == "*" ? Expr::Kind::Mul : Expr::Kind::Div;
            ++pos_;
            lhs = located(make_node(kind, {lhs, factor()}), op);
        }
        return lhs;
    }

    ExprPtr factor()
    {
        ExprPtr base = atom();
        if (is_sym("^")) {
            const Token& op = peek();
            ++pos_;
            base = located(make_node(Expr::Kind::Pow, {base, atom()}), op);
        }
        if (is_sym("!")) {
            const Token& op = peek();
            ++pos_;
            base = located(make_node(Expr::Kind::Fact, {base}), op);
        }
        return base;
    }

    ExprPtr atom()
    {
        Guard g(*this);
        const Token tok = peek();
        if (tok.kind == Token::Kind::Int) {
            ++pos_;
            return located(make_int(BigInt(tok.text, 10)), tok);
        }
        if (is_sym("(")) {
            ++pos_;
            ExprPtr e = expr();
            expect_sym(")");
            return e;
        }
        if (tok.kind != Token::Kind::Ident) {
            if (tok.kind == Token::Kind::End) fail("unexpected end of input", tok);
            fail("unexpected '" + tok.text + "'", tok);
        }
        ++pos_;
        if (tok.text == "n") return located(make_n(), tok);
        if (tok.text == "t" && is_sym("(")) {
            // t ( n - INT )
            ++pos_;
            if (!is_ident("n")) fail("prior-term reference must have the form t(n-k)" + found(), peek());
            ++pos_;
            expect_sym("-");
            const Token k = peek();
            if (k.kind != Token::Kind::Int) fail("expected a positive integer offset" + found(), k);
            ++pos_;
            expect_sym(")");
            BigInt off(k.text, 10);
            if (off < 1 || off > max_lookback)
                fail("prior-term offset must be between 1 and " + std::to_string(max_lookback), k);
            has_prev_ = true;
            return located(make_prev(off.get_si()), tok);
        }
        if (is_sym("(")) {
            ++pos_;
            std::vector<ExprPtr> args;
            if (!is_sym(")")) {
                // prodprefix takes a bare sequence name as its first argument.
                args.push_back(expr());
                while (is_sym(",")) {
                    ++pos_;
                    args.push_back(expr());
                }
            }
            expect_sym(")");
            check_call(tok, args);
            return located(make_call(tok.text, std::move(args)), tok);
        }
        if (ctx_.params && !ctx_.params->count(tok.text) && tok.text != "t" && !(ctx_.sequences && ctx_.sequences->count(tok.text)))
            fail("unknown identifier '" + tok.text + "'", tok);
        return located(make_param(tok.text), tok);
    }

    void check_call(const Token& tok, const std::vector<ExprPtr>& args) const
    {
        auto it = builtins().find(tok.text);
        std::size_t want = 1;
        if (it != builtins().end()) {
            want = it->second;
        } else if (ctx_.sequences && !ctx_.sequences->count(tok.text)) {
            fail("unknown identifier '" + tok.text + "'", tok);
        }
        if (args.size() != want)
            fail("'" + tok.text + "' expects " + std::to_string(want) + " argument" + (want == 1 ? "" : "s") + ", got " +
                     std::to_string(args.size()),
                 tok);
        if (tok.text == "prodprefix" && args[0]->kind != Expr::Kind::Param)
            fail("prodprefix expects a sequence name as its first argument", tok);
    }

    static ExprPtr located(ExprPtr e, const Token& t)
    {
        auto m = std::const_pointer_cast<Expr>(e);
        m->line = t.line;
        m->col = t.col;
        return m;
    }

    std::size_t pos_ = 0;
    bool has_prev_ = false;

private:
    struct Guard {
        explicit Guard(Parser& p) : p_(p)
        {
            if (++p_.depth_ > 200) p_.fail("expression nested too deeply", p_.peek());
        }
        ~Guard() { --p_.depth_; }
        Parser& p_;
    };

    std::vector<Token> toks_;
    const ParseContext& ctx_;
    int depth_ = 0;
};

} // namespace detail

/// Parses a single expression; the whole input must be consumed.
inline ExprPtr parse_expression(std::string_view text, const ParseContext& ctx = {})
{
    detail::Parser p(detail::tokenize(text), ctx);
    ExprPtr e = p.expr();
    if (!p.at_end()) p.fail("unexpected '" + p.peek().text + "' after expression", p.peek());
    return e;
}

/// Parses a full sequence definition (see the grammar at the top of this file).
inline SequenceDef parse_sequence(std::string_view text, const ParseContext& ctx = {}, std::string name = "t")
{
    detail::Parser p(detail::tokenize(text), ctx);
    SequenceDef def;
    def.name = std::move(name);

    std::vector<std::pair<std::int64_t, ExprPtr>> bases;
    ExprPtr step;
    ExprPtr closed;
    detail::Token step_tok;
    for (;;) {
        if (p.at_end()) p.fail("empty definition", p.peek());
        const detail::Token start = p.peek();
        bool is_base = p.is_ident("t") && p.is_sym("(", 1) && p.peek(2).kind == detail::Token::Kind::Int &&
                       p.is_sym(")", 3) && p.is_sym("=", 4);
        bool is_step = p.is_ident("t") && p.is_sym("(", 1) && p.is_ident("n", 2) && p.is_sym(")", 3) && p.is_sym("=", 4);
        if (is_base) {
            if (step) p.fail("base statements must precede the step statement", start);
            std::int64_t idx = std::stoll(p.peek(2).text);
            p.pos_ += 5;
            bool saw_prev = p.has_prev_;
            ExprPtr v = p.expr();
            if (p.has_prev_ != saw_prev) p.fail("base values cannot reference prior terms", start);
            bases.emplace_back(idx, v);
        } else if (is_step) {
            if (step) p.fail("more than one step statement", start);
            p.pos_ += 5;
            step_tok = start;
            step = p.expr();
        } else {
            if (step || !bases.empty() || closed) p.fail("expected a statement 't(INT) = ...' or 't(n) = ...'", start);
            closed = p.expr();
        }
        if (p.at_end()) break;
        p.expect_sym(";");
        if (p.at_end()) break;
    }

    if (closed) {
        if (max_prev_offset(*closed) > 0)
            throw parse_error("a closed form cannot reference prior terms t(n-k); add base statements", closed->line,
                              closed->col);
        bool is_primes = closed->kind == Expr::Kind::Call && closed->name == "nth_prime" &&
                         closed->args[0]->kind == Expr::Kind::N;
        if (is_primes)
            def.kind = Primes{};
        else
            def.kind = ClosedForm{closed};
        return def;
    }
    if (!step) p.fail("recurrence without a step statement 't(n) = ...'", p.peek());
    if (bases.empty()) p.fail("recurrence without base statements", step_tok);
    std::sort(bases.begin(), bases.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (std::size_t i = 1; i < bases.size(); ++i)
        if (bases[i].first != bases[i - 1].first + 1)
            p.fail("base statements must cover consecutive indices", step_tok);
    long need = max_prev_offset(*step);
    if (need > static_cast<long>(bases.size()))
        p.fail("step references t(n-" + std::to_string(need) + ") but only " + std::to_string(bases.size()) +
                   " base term(s) are given",
               step_tok);
    def.first_index = bases.front().first;
    Recurrence rec;
    rec.step = step;
    for (auto& [idx, e] : bases) rec.base.push_back(e);
    def.kind = std::move(rec);
    return def;
}

} // namespace irrcert::seq
