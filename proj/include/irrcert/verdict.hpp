#pragma once

// Three-valued analysis outcomes and the assumption audit trail.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace irrcert {

/// Inclusive index range.
struct Window {
    std::int64_t from = 1;
    std::int64_t to = 1;

    Window() = default;
    Window(std::int64_t f, std::int64_t t) : from(f), to(t)
    {
        if (f > t) throw std::invalid_argument("window with from > to");
    }

    std::int64_t size() const { return to - from + 1; }
    bool contains(std::int64_t n) const { return from <= n && n <= to; }
    friend bool operator==(const Window&, const Window&) = default;
};

/// A declared "for all large n" fact that was checked on `audited` only.
struct AssumedFact {
    std::string target;
    std::string fact;
    Window audited;
    friend bool operator==(const AssumedFact&, const AssumedFact&) = default;
};

enum class Status { CertifiedTrue, RefutedAt, Inconclusive };

inline const char* to_string(Status s)
{
    switch (s) {
    case Status::CertifiedTrue: return "CertifiedTrue";
    case Status::RefutedAt: return "RefutedAt";
    case Status::Inconclusive: return "Inconclusive";
    }
    return "?";
}

struct Verdict {
    Status status = Status::Inconclusive;
    std::optional<std::int64_t> index; // set for RefutedAt
    std::string reason;
    std::vector<AssumedFact> assumed;

    static Verdict certified(std::string why = {}) { return {Status::CertifiedTrue, std::nullopt, std::move(why), {}}; }
    static Verdict refuted_at(std::int64_t n, std::string why = {}) { return {Status::RefutedAt, n, std::move(why), {}}; }
    static Verdict inconclusive(std::string why) { return {Status::Inconclusive, std::nullopt, std::move(why), {}}; }

    bool is_certified() const { return status == Status::CertifiedTrue; }
    bool is_refuted() const { return status == Status::RefutedAt; }
    bool is_inconclusive() const { return status == Status::Inconclusive; }

    Verdict& assume(const AssumedFact& f)
    {
        for (const auto& g : assumed)
            if (g == f) return *this;
        assumed.push_back(f);
        return *this;
    }
    Verdict& assume_all(const std::vector<AssumedFact>& fs)
    {
        for (const auto& f : fs) assume(f);
        return *this;
    }
};

/// Conjunction: first refutation wins, then any inconclusive, else certified.
inline Verdict conjunction(const std::vector<Verdict>& parts)
{
    Verdict out = Verdict::certified();
    for (const auto& p : parts) {
        out.assume_all(p.assumed);
        if (p.is_refuted() && !out.is_refuted()) {
            out.status = Status::RefutedAt;
            out.index = p.index;
            out.reason = p.reason;
        } else if (p.is_inconclusive() && out.is_certified()) {
            out.status = Status::Inconclusive;
            out.reason = p.reason;
        }
    }
    return out;
}

} // namespace irrcert
