#ifndef CUNTZ_SERIALIZATION_HPP
#define CUNTZ_SERIALIZATION_HPP

#include <json.hpp>

#include "entropy.hpp"
#include "group.hpp"
#include "masa.hpp"
#include "multiplicative_unitary.hpp"

namespace cuntz {

namespace detail {

inline void require_json(bool ok, const std::string& what) {
    if (!ok) throw ValidationError("bad input: " + what);
}

inline Word word_from_json(const nlohmann::json& j, const char* field) {
    require_json(j.is_array(), std::string(field) + " must be an array");
    Word w;
    for (const auto& v : j) {
        require_json(v.is_number_integer(),
                     std::string(field) + " letters must be integers");
        const long long x = v.get<long long>();
        require_json(x >= 0 && x <= 254, std::string(field) +
                                             " letter out of range");
        w.push_back(static_cast<Letter>(x));
    }
    return w;
}

inline nlohmann::json word_to_json(const Word& w) {
    nlohmann::json arr = nlohmann::json::array();
    for (Letter a : w) arr.push_back(static_cast<int>(a));
    return arr;
}

inline int alphabet_from_json(const nlohmann::json& j) {
    require_json(j.is_object() && j.contains("N"), "missing alphabet size N");
    require_json(j["N"].is_number_integer(), "N must be an integer");
    const long long n = j["N"].get<long long>();
    require_json(n >= 2 && n <= 255, "N out of range");
    return static_cast<int>(n);
}

}  // namespace detail

inline nlohmann::json element_to_json(const Element& e) {
    nlohmann::json terms = nlohmann::json::array();
    for (const Term& t : e.terms()) {
        nlohmann::json jt;
        jt["re"] = t.coeff.real();
        jt["im"] = t.coeff.imag();
        jt["J"] = detail::word_to_json(t.j);
        jt["K"] = detail::word_to_json(t.k);
        terms.push_back(std::move(jt));
    }
    return nlohmann::json{{"N", e.n()}, {"terms", std::move(terms)}};
}

inline Element element_from_json(const nlohmann::json& j,
                                 const ScalarConfig& cfg = ScalarConfig{}) {
    const int n = detail::alphabet_from_json(j);
    detail::require_json(j.contains("terms") && j["terms"].is_array(),
                         "missing terms array");
    std::vector<Term> terms;
    for (const auto& jt : j["terms"]) {
        detail::require_json(jt.is_object() && jt.contains("re") &&
                                 jt.contains("im") && jt.contains("J") &&
                                 jt.contains("K"),
                             "term needs re, im, J, K");
        detail::require_json(
            jt["re"].is_number() && jt["im"].is_number(),
            "term coefficients must be numbers");
        terms.push_back(Term{Complex(jt["re"].get<double>(),
                                     jt["im"].get<double>()),
                             detail::word_from_json(jt["J"], "J"),
                             detail::word_from_json(jt["K"], "K")});
    }
    return Element::from_terms(n, std::move(terms), cfg);
}

inline nlohmann::json endomorphism_to_json(const Endomorphism& rho) {
    return nlohmann::json{{"N", rho.n()},
                          {"unitary", element_to_json(rho.unitary())}};
}

// Accepts either {"N", "unitary": element} or a bare element object.
inline Element endomorphism_unitary_from_json(
    const nlohmann::json& j, const ScalarConfig& cfg = ScalarConfig{}) {
    detail::require_json(j.is_object(), "expected an object");
    if (j.contains("unitary")) {
        const Element u = element_from_json(j["unitary"], cfg);
        if (j.contains("N"))
            detail::require_json(detail::alphabet_from_json(j) == u.n(),
                                 "outer N disagrees with unitary");
        return u;
    }
    return element_from_json(j, cfg);
}

inline Endomorphism endomorphism_from_json(
    const nlohmann::json& j, const ScalarConfig& cfg = ScalarConfig{}) {
    return Endomorphism::from_unitary(endomorphism_unitary_from_json(j, cfg),
                                      cfg);
}

inline nlohmann::json matrix_to_json(const ComplexMatrix& m) {
    detail::require_json(m.rows() == m.cols(),
                         "only square matrices serialize");
    nlohmann::json entries = nlohmann::json::array();
    for (const Complex& c : m.data())
        entries.push_back(nlohmann::json::array({c.real(), c.imag()}));
    return nlohmann::json{{"dim", m.rows()}, {"entries", std::move(entries)}};
}

inline ComplexMatrix matrix_from_json(const nlohmann::json& j) {
    detail::require_json(j.is_object() && j.contains("dim") &&
                             j.contains("entries"),
                         "matrix needs dim and entries");
    detail::require_json(j["dim"].is_number_integer() &&
                             j["dim"].get<long long>() >= 1,
                         "dim must be a positive integer");
    const std::size_t d = j["dim"].get<std::size_t>();
    const auto& entries = j["entries"];
    detail::require_json(entries.is_array() && entries.size() == d * d,
                         "entries must list dim^2 [re, im] pairs");
    ComplexMatrix m(d, d);
    std::size_t idx = 0;
    for (const auto& pair : entries) {
        detail::require_json(pair.is_array() && pair.size() == 2 &&
                                 pair[0].is_number() && pair[1].is_number(),
                             "entry must be an [re, im] pair");
        m(idx / d, idx % d) =
            Complex(pair[0].get<double>(), pair[1].get<double>());
        ++idx;
    }
    return m;
}

inline nlohmann::json group_to_json(const DualGroup& g) {
    nlohmann::json orders = nlohmann::json::array();
    for (int o : g.orders()) orders.push_back(o);
    nlohmann::json bracket = nlohmann::json::array();
    for (int a = 0; a < g.n(); ++a)
        for (int b = 0; b < g.n(); ++b) {
            const Complex v = g.bracket(a, b);
            bracket.push_back(nlohmann::json::array({v.real(), v.imag()}));
        }
    return nlohmann::json{{"orders", std::move(orders)},
                          {"bracket", std::move(bracket)}};
}

inline DualGroup group_from_json(const nlohmann::json& j) {
    detail::require_json(j.is_object() && j.contains("orders"),
                         "group needs an orders array");
    detail::require_json(j["orders"].is_array() && !j["orders"].empty(),
                         "orders must be a nonempty array");
    std::vector<int> orders;
    for (const auto& v : j["orders"]) {
        detail::require_json(v.is_number_integer() && v.get<long long>() >= 1,
                             "orders must be positive integers");
        orders.push_back(v.get<int>());
    }
    if (!j.contains("bracket")) return DualGroup::cyclic(orders);

    long long n = 1;
    for (int o : orders) n *= o;
    const auto& entries = j["bracket"];
    detail::require_json(entries.is_array() &&
                             entries.size() ==
                                 static_cast<std::size_t>(n) * n,
                         "bracket must list N^2 [re, im] pairs");
    ComplexMatrix bracket(n, n);
    std::size_t idx = 0;
    for (const auto& pair : entries) {
        detail::require_json(pair.is_array() && pair.size() == 2 &&
                                 pair[0].is_number() && pair[1].is_number(),
                             "bracket entry must be an [re, im] pair");
        bracket(idx / n, idx % n) =
            Complex(pair[0].get<double>(), pair[1].get<double>());
        ++idx;
    }
    return DualGroup::with_bracket(orders, std::move(bracket));
}

inline nlohmann::json rule_to_json(const LocalRule& rule) {
    nlohmann::json tables = nlohmann::json::object();
    for (int len = 1; len <= rule.depth; ++len) {
        nlohmann::json rows = nlohmann::json::array();
        const auto& table = rule.tables[len - 1];
        for (std::uint64_t i = 0; i < table.size(); ++i)
            rows.push_back(nlohmann::json::array(
                {detail::word_to_json(
                     word_at(i, len + rule.lookahead, rule.n)),
                 detail::word_to_json(table[i])}));
        tables[std::to_string(len)] = std::move(rows);
    }
    nlohmann::json j{{"N", rule.n},
                     {"r", rule.lookahead},
                     {"depth", rule.depth},
                     {"tables", std::move(tables)},
                     {"provenance", rule.provenance}};
    if (!rule.closed_form.empty()) j["closed_form"] = rule.closed_form;
    return j;
}

inline LocalRule rule_from_json(const nlohmann::json& j) {
    const int n = detail::alphabet_from_json(j);
    detail::require_json(j.contains("r") && j["r"].is_number_integer() &&
                             j["r"].get<long long>() >= 0,
                         "rule needs a nonnegative lookahead r");
    detail::require_json(j.contains("depth") &&
                             j["depth"].is_number_integer() &&
                             j["depth"].get<long long>() >= 1,
                         "rule needs a positive depth");
    LocalRule rule;
    rule.n = n;
    rule.lookahead = j["r"].get<int>();
    rule.depth = j["depth"].get<int>();
    rule.provenance = j.value("provenance", std::string("extracted"));
    rule.closed_form = j.value("closed_form", std::string());
    detail::require_json(j.contains("tables") && j["tables"].is_object(),
                         "rule needs a tables object");
    for (int len = 1; len <= rule.depth; ++len) {
        const std::string key = std::to_string(len);
        detail::require_json(j["tables"].contains(key),
                             "tables missing window " + key);
        const auto& rows = j["tables"][key];
        const std::uint64_t count =
            ipow(n, static_cast<unsigned>(len + rule.lookahead));
        detail::require_json(rows.is_array() && rows.size() == count,
                             "window " + key + " must map every input word");
        std::vector<Word> table(count);
        std::vector<bool> seen(count, false);
        for (const auto& row : rows) {
            detail::require_json(row.is_array() && row.size() == 2,
                                 "table rows are [input, output] pairs");
            const Word in = detail::word_from_json(row[0], "input");
            const Word out = detail::word_from_json(row[1], "output");
            detail::require_json(
                in.size() ==
                        static_cast<std::size_t>(len + rule.lookahead) &&
                    word_valid(in, n),
                "input word has the wrong shape");
            detail::require_json(out.size() == static_cast<std::size_t>(len) &&
                                     word_valid(out, n),
                                 "output word has the wrong shape");
            const std::uint64_t idx = word_index(in, n);
            detail::require_json(!seen[idx], "input word listed twice");
            seen[idx] = true;
            table[idx] = out;
        }
        for (bool s : seen)
            detail::require_json(s, "window " + key + " has unmapped words");
        rule.tables.push_back(std::move(table));
    }
    return rule;
}

inline nlohmann::json estimate_to_json(const EntropyEstimate& est) {
    nlohmann::json j{{"counts", est.counts},
                     {"h_ratio", est.h_ratio},
                     {"h_cumulative", est.h_cumulative},
                     {"truncated", est.truncated},
                     {"counts_are_alphabet_powers",
                      est.counts_are_alphabet_powers}};
    if (est.truncated) j["truncation_reason"] = est.truncation_reason;
    return j;
}

}  // namespace cuntz

#endif  // CUNTZ_SERIALIZATION_HPP
