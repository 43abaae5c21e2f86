#pragma once

// Sequence definitions and the declared asymptotic facts attached to them.

#include "irrcert/seq/ast.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace irrcert::seq {

// "for all n >= from": term(n) >= bound(n).
struct EventuallyGe {
    ExprPtr bound;
    std::int64_t from = 1;
};

// term(n) > 0.
struct EventuallyPositive {
    std::int64_t from = 1;
};

// term(n+1) >= term(n).
struct MonotoneNondecreasing {
    std::int64_t from = 1;
};

// |term(n+1) / term(n)| <= c, with 0 <= c < 1.
struct RatioDominated {
    BigRat c;
    std::int64_t from = 1;
};

// 0 <= ln term(n) <= C r^n, with C >= 0 and 0 < r < 1.
struct LogTailDominated {
    BigRat C;
    BigRat r;
    std::int64_t from = 1;
};

using DeclaredFact = std::variant<EventuallyGe, EventuallyPositive, MonotoneNondecreasing, RatioDominated, LogTailDominated>;

/// A fact about a named sequence ("a", "b", "d") or the series terms ("terms").
struct TargetedFact {
    std::string target;
    DeclaredFact fact;
};

inline std::int64_t fact_from(const DeclaredFact& f)
{
    return std::visit([](const auto& x) { return x.from; }, f);
}

inline void validate(const DeclaredFact& f)
{
    std::visit(
        [](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, RatioDominated>) {
                if (x.c < 0 || x.c >= 1) throw std::invalid_argument("ratio_dominated requires 0 <= c < 1");
            } else if constexpr (std::is_same_v<T, LogTailDominated>) {
                if (x.C < 0) throw std::invalid_argument("log_tail_dominated requires C >= 0");
                if (x.r <= 0 || x.r >= 1) throw std::invalid_argument("log_tail_dominated requires 0 < r < 1");
            } else if constexpr (std::is_same_v<T, EventuallyGe>) {
                if (!x.bound) throw std::invalid_argument("eventually_ge requires a bound expression");
            }
        },
        f);
}

inline std::string describe(const DeclaredFact& f)
{
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            const std::string from = "from=" + std::to_string(x.from);
            if constexpr (std::is_same_v<T, EventuallyGe>)
                return "eventually_ge(bound=" + print(*x.bound) + ", " + from + ")";
            else if constexpr (std::is_same_v<T, EventuallyPositive>)
                return "eventually_positive(" + from + ")";
            else if constexpr (std::is_same_v<T, MonotoneNondecreasing>)
                return "monotone_nondecreasing(" + from + ")";
            else if constexpr (std::is_same_v<T, RatioDominated>)
                return "ratio_dominated(c=" + x.c.get_str() + ", " + from + ")";
            else
                return "log_tail_dominated(C=" + x.C.get_str() + ", r=" + x.r.get_str() + ", " + from + ")";
        },
        f);
}

struct ClosedForm {
    ExprPtr expr;
};

struct Recurrence {
    std::vector<ExprPtr> base; // constant expressions for first_index, first_index + 1, ...
    ExprPtr step;
};

struct Table {
    std::vector<BigRat> values; // values at first_index, first_index + 1, ...
};

struct Primes {};

using SequenceKind = std::variant<ClosedForm, Recurrence, Table, Primes>;

inline const char* kind_name(const SequenceKind& k)
{
    switch (k.index()) {
    case 0: return "closed_form";
    case 1: return "recurrence";
    case 2: return "table";
    default: return "primes";
    }
}

/// Recurrence steps may look back at most this many terms.
constexpr long max_lookback = 8;

struct SequenceDef {
    std::string name = "t";
    SequenceKind kind = Primes{};
    std::int64_t first_index = 1;
    std::vector<DeclaredFact> facts;
};

} // namespace irrcert::seq
