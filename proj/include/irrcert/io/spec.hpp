#pragma once

// JSON series specification files: parsing, structural validation and
// conversion to SeriesInstance / ProductSeq. Mirrors docs/spec.schema.json.

#include "irrcert/hancl.hpp"
#include "irrcert/series.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace irrcert::io {

using json = nlohmann::json;

/// Invalid specification; `path` is a JSON pointer to the offending value.
class spec_error : public std::runtime_error {
public:
    spec_error(const std::string& path, const std::string& msg)
        : std::runtime_error((path.empty() ? std::string("/") : path) + ": " + msg), path_(path)
    {
    }
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

struct SeriesSpec {
    Form form = Form::Cantor;
    seq::SequenceDef a, b;
    std::optional<seq::SequenceDef> d;
    std::vector<seq::TargetedFact> facts;
    std::int64_t first_index = 1;
    std::map<std::string, BigRat> params;
    json source;
};

namespace detail {

inline const json& require(const json& obj, const std::string& key, const std::string& path)
{
    auto it = obj.find(key);
    if (it == obj.end()) throw spec_error(path, "missing required field \"" + key + "\"");
    return *it;
}

inline void only_keys(const json& obj, const std::set<std::string>& allowed, const std::string& path)
{
    for (const auto& [k, v] : obj.items())
        if (!allowed.count(k)) throw spec_error(path + "/" + k, "unknown field");
}

inline std::string as_string(const json& v, const std::string& path)
{
    if (!v.is_string()) throw spec_error(path, "expected a string");
    return v.get<std::string>();
}

inline std::int64_t as_int(const json& v, const std::string& path)
{
    if (!v.is_number_integer()) throw spec_error(path, "expected an integer");
    return v.get<std::int64_t>();
}

/// Rationals are strings ("3/4", "1e-3", "-2.5") or JSON integers.
inline BigRat as_rational(const json& v, const std::string& path)
{
    if (v.is_number_integer()) return BigRat(BigInt(std::to_string(v.get<std::int64_t>())));
    if (!v.is_string()) throw spec_error(path, "expected a rational string or an integer");
    try {
        return parse_rational(v.get<std::string>());
    } catch (const std::exception& e) {
        throw spec_error(path, e.what());
    }
}

inline seq::SequenceDef parse_seq(const json& v, const std::string& name, std::int64_t first_index,
                                  const std::string& path)
{
    if (!v.is_object()) throw spec_error(path, "expected a sequence object");
    const std::string kind = as_string(require(v, "kind", path), path + "/kind");
    if (auto it = v.find("first_index"); it != v.end()) first_index = as_int(*it, path + "/first_index");
    seq::SequenceDef def;
    try {
        if (kind == "closed_form") {
            only_keys(v, {"kind", "expr", "first_index"}, path);
            def = seq::parse_sequence(as_string(require(v, "expr", path), path + "/expr"), {}, name);
            if (std::holds_alternative<seq::Recurrence>(def.kind))
                throw spec_error(path + "/expr", "closed_form expression is a recurrence");
        } else if (kind == "recurrence") {
            only_keys(v, {"kind", "base", "step", "first_index"}, path);
            const json& base = require(v, "base", path);
            if (!base.is_array() || base.empty()) throw spec_error(path + "/base", "expected a nonempty array");
            std::string text;
            for (std::size_t i = 0; i < base.size(); ++i)
                text += "t(" + std::to_string(first_index + static_cast<std::int64_t>(i)) +
                        ") = " + as_string(base[i], path + "/base/" + std::to_string(i)) + "; ";
            text += "t(n) = " + as_string(require(v, "step", path), path + "/step");
            def = seq::parse_sequence(text, {}, name);
        } else if (kind == "table") {
            only_keys(v, {"kind", "values", "first_index"}, path);
            const json& vals = require(v, "values", path);
            if (!vals.is_array() || vals.empty()) throw spec_error(path + "/values", "expected a nonempty array");
            seq::Table t;
            for (std::size_t i = 0; i < vals.size(); ++i)
                t.values.push_back(as_rational(vals[i], path + "/values/" + std::to_string(i)));
            def.name = name;
            def.kind = std::move(t);
        } else if (kind == "primes") {
            only_keys(v, {"kind", "first_index"}, path);
            def.name = name;
            def.kind = seq::Primes{};
        } else {
            throw spec_error(path + "/kind", "unknown sequence kind \"" + kind + "\"");
        }
    } catch (const seq::parse_error& e) {
        throw spec_error(path, std::string("parse error: ") + e.what());
    }
    def.name = name;
    def.first_index = first_index;
    return def;
}

inline seq::DeclaredFact parse_fact(const json& v, const std::string& path)
{
    const std::string type = as_string(require(v, "type", path), path + "/type");
    const std::int64_t from = v.contains("from") ? as_int(v.at("from"), path + "/from") : 1;
    seq::DeclaredFact f;
    if (type == "eventually_ge") {
        only_keys(v, {"target", "type", "from", "bound"}, path);
        try {
            f = seq::EventuallyGe{seq::parse_expression(as_string(require(v, "bound", path), path + "/bound")), from};
        } catch (const seq::parse_error& e) {
            throw spec_error(path + "/bound", std::string("parse error: ") + e.what());
        }
    } else if (type == "eventually_positive") {
        only_keys(v, {"target", "type", "from"}, path);
        f = seq::EventuallyPositive{from};
    } else if (type == "monotone_nondecreasing") {
        only_keys(v, {"target", "type", "from"}, path);
        f = seq::MonotoneNondecreasing{from};
    } else if (type == "ratio_dominated") {
        only_keys(v, {"target", "type", "from", "c"}, path);
        f = seq::RatioDominated{as_rational(require(v, "c", path), path + "/c"), from};
    } else if (type == "log_tail_dominated") {
        only_keys(v, {"target", "type", "from", "C", "r"}, path);
        f = seq::LogTailDominated{as_rational(require(v, "C", path), path + "/C"),
                                  as_rational(require(v, "r", path), path + "/r"), from};
    } else {
        throw spec_error(path + "/type", "unknown fact type \"" + type + "\"");
    }
    try {
        seq::validate(f);
    } catch (const std::invalid_argument& e) {
        throw spec_error(path, e.what());
    }
    return f;
}

} // namespace detail

inline SeriesSpec parse_spec(const json& doc)
{
    using namespace detail;
    if (!doc.is_object()) throw spec_error("", "expected a JSON object");
    only_keys(doc, {"form", "a", "b", "d", "facts", "first_index", "params", "description"}, "");
    if (auto it = doc.find("description"); it != doc.end()) as_string(*it, "/description");
    SeriesSpec s;
    s.source = doc;
    const std::string form = as_string(require(doc, "form", ""), "/form");
    try {
        s.form = parse_form(form);
    } catch (const std::exception&) {
        throw spec_error("/form", "expected \"cantor\" or \"plain\"");
    }
    if (auto it = doc.find("first_index"); it != doc.end()) s.first_index = as_int(*it, "/first_index");
    s.a = parse_seq(require(doc, "a", ""), "a", s.first_index, "/a");
    s.b = parse_seq(require(doc, "b", ""), "b", s.first_index, "/b");
    if (auto it = doc.find("d"); it != doc.end()) s.d = parse_seq(*it, "d", s.first_index, "/d");
    if (auto it = doc.find("params"); it != doc.end()) {
        if (!it->is_object()) throw spec_error("/params", "expected an object");
        for (const auto& [k, v] : it->items()) s.params[k] = as_rational(v, "/params/" + k);
    }
    if (auto it = doc.find("facts"); it != doc.end()) {
        if (!it->is_array()) throw spec_error("/facts", "expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string path = "/facts/" + std::to_string(i);
            const json& f = (*it)[i];
            if (!f.is_object()) throw spec_error(path, "expected a fact object");
            const std::string target = as_string(require(f, "target", path), path + "/target");
            seq::DeclaredFact fact = parse_fact(f, path);
            if (target == "d") {
                if (!s.d) throw spec_error(path + "/target", "fact targets d but no d sequence is given");
                s.d->facts.push_back(fact);
            } else if (target == "a" || target == "b" || target == "terms") {
                s.facts.push_back({target, fact});
            } else {
                throw spec_error(path + "/target", "expected \"a\", \"b\", \"d\" or \"terms\"");
            }
        }
    }
    if (s.a.first_index != s.b.first_index) throw spec_error("/b/first_index", "a and b must share the first index");
    return s;
}

inline SeriesSpec parse_spec_text(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw spec_error("", std::string("invalid JSON: ") + e.what());
    }
    return parse_spec(doc);
}

inline SeriesSpec load_spec(const std::string& file)
{
    std::ifstream in(file);
    if (!in) throw spec_error("", "cannot open " + file);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_spec_text(buf.str());
}

inline SeriesInstance instantiate(const SeriesSpec& s)
{
    try {
        return SeriesInstance(s.a, s.b, s.form, s.facts, s.params);
    } catch (const std::invalid_argument& e) {
        throw spec_error("", e.what());
    }
}

inline ProductSeq product_of(const SeriesSpec& s)
{
    if (!s.d) throw spec_error("/d", "this analysis needs a product sequence d");
    return ProductSeq(*s.d);
}

} // namespace irrcert::io
