#ifndef CUNTZ_ELEMENT_HPP
#define CUNTZ_ELEMENT_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <utility>

#include "core.hpp"

namespace cuntz {

// One summand coeff * S_J S_K^* of an algebra element.
struct Term {
    Complex coeff;
    Word j;
    Word k;

    int degree() const {
        return static_cast<int>(j.size()) - static_cast<int>(k.size());
    }
};

// Finite linear combination of words S_J S_K^* over a fixed alphabet.
//
// Canonical form: terms are grouped by degree |J|-|K|; within a degree every
// K is padded to the group's maximal length via S_J S_K^* =
// sum over |M|=p of S_{JM} S_{KM}^*, duplicates merged, coefficients below
// zero_tol dropped, terms sorted by (degree, J, K). Padding only ever goes
// up; contraction exists solely as a display aid.
class Element {
  public:
    static Element from_terms(int n, std::vector<Term> terms,
                              const ScalarConfig& cfg = ScalarConfig{}) {
        check_alphabet(n);
        for (const Term& t : terms) {
            if (!word_valid(t.j, n) || !word_valid(t.k, n))
                throw ValidationError("term uses letters outside alphabet");
        }
        Element e;
        e.n_ = n;
        e.terms_ = canonicalize(n, std::move(terms), cfg.zero_tol);
        return e;
    }

    static Element zero(int n) { return from_terms(n, {}); }

    static Element one(int n) { return scalar(n, Complex(1.0, 0.0)); }

    static Element scalar(int n, Complex c) {
        return from_terms(n, {Term{c, {}, {}}});
    }

    static Element isometry(int n, Letter i) {
        return from_terms(n, {Term{Complex(1.0, 0.0), Word{i}, {}}});
    }

    static Element monomial(int n, Complex c, Word j, Word k) {
        return from_terms(n, {Term{c, std::move(j), std::move(k)}});
    }

    int n() const { return n_; }
    const std::vector<Term>& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const Term& t : terms_) m = std::max(m, std::abs(t.coeff));
        return m;
    }

    std::vector<int> degrees() const {
        std::vector<int> ds;
        for (const Term& t : terms_)
            if (ds.empty() || ds.back() != t.degree()) ds.push_back(t.degree());
        return ds;
    }

    // Common K-length of the degree-d group, 0 if the degree is absent.
    std::size_t level(int degree) const {
        for (const Term& t : terms_)
            if (t.degree() == degree) return t.k.size();
        return 0;
    }

  private:
    static void check_alphabet(int n) {
        if (n < 2 || n > 255)
            throw ValidationError("alphabet size must lie in [2, 255]");
    }

    using Key = std::pair<Word, Word>;

    static std::vector<Term> canonicalize(int n, std::vector<Term> raw,
                                          double zero_tol) {
        std::map<int, std::vector<Term>> by_degree;
        for (Term& t : raw) by_degree[t.degree()].push_back(std::move(t));

        std::vector<Term> out;
        for (auto& [deg, group] : by_degree) {
            std::size_t ell = 0;
            for (const Term& t : group) ell = std::max(ell, t.k.size());

            std::map<Key, Complex> table;
            for (const Term& t : group) {
                const std::size_t pad = ell - t.k.size();
                const std::uint64_t fan = ipow(n, static_cast<unsigned>(pad));
                for (std::uint64_t m = 0; m < fan; ++m) {
                    const Word suffix = word_at(m, pad, n);
                    table[{concat(t.j, suffix), concat(t.k, suffix)}] +=
                        t.coeff;
                }
            }
            for (auto& [key, c] : table) {
                if (std::abs(c) < zero_tol) continue;
                out.push_back(Term{c, key.first, key.second});
            }
        }
        return out;
    }

    friend std::map<Key, Complex> degree_table_at_level(const Element& e,
                                                        int degree,
                                                        std::size_t target);

    int n_ = 2;
    std::vector<Term> terms_;
};

// Coefficient table of the degree-d group padded up to K-length `target`.
inline std::map<std::pair<Word, Word>, Complex> degree_table_at_level(
    const Element& e, int degree, std::size_t target) {
    std::map<std::pair<Word, Word>, Complex> table;
    for (const Term& t : e.terms_) {
        if (t.degree() != degree) continue;
        const std::size_t pad = target - t.k.size();
        const std::uint64_t fan = ipow(e.n_, static_cast<unsigned>(pad));
        for (std::uint64_t m = 0; m < fan; ++m) {
            const Word suffix = word_at(m, pad, e.n_);
            table[{concat(t.j, suffix), concat(t.k, suffix)}] += t.coeff;
        }
    }
    return table;
}

// Try to rewrite the degree-d part with K-length `target` by undoing fan
// expansion. The stored form only ever pads upward, so code that needs a
// specific level (matrix views, level membership) contracts here, on the
// fly and without touching the canonical form. Empty result means the part
// genuinely needs longer words.
inline std::optional<std::map<std::pair<Word, Word>, Complex>>
reduced_degree_table(const Element& e, int degree, std::size_t target,
                     const ScalarConfig& cfg = ScalarConfig{}) {
    const int n = e.n();
    std::size_t cur = std::max(e.level(degree), target);
    auto table = degree_table_at_level(e, degree, cur);
    while (cur > target) {
        std::map<std::pair<Word, Word>, std::vector<Complex>> diagonal;
        for (const auto& [key, c] : table) {
            if (key.first.back() != key.second.back()) {
                if (std::abs(c) > cfg.zero_tol) return std::nullopt;
                continue;
            }
            Word jp(key.first.begin(), key.first.end() - 1);
            Word kp(key.second.begin(), key.second.end() - 1);
            diagonal[{std::move(jp), std::move(kp)}].push_back(c);
        }
        std::map<std::pair<Word, Word>, Complex> next;
        for (const auto& [key, vals] : diagonal) {
            // Letters without an entry carry coefficient zero, so a partial
            // fan only contracts if the whole fan is effectively zero.
            const Complex v = vals.size() == static_cast<std::size_t>(n)
                                  ? vals.front()
                                  : Complex(0.0);
            for (const Complex& c : vals)
                if (std::abs(c - v) > cfg.zero_tol) return std::nullopt;
            if (std::abs(v) > cfg.zero_tol) next[key] = v;
        }
        table = std::move(next);
        --cur;
    }
    return table;
}

inline void require_same_alphabet(const Element& a, const Element& b) {
    if (a.n() != b.n())
        throw AlphabetMismatch("operands built over different alphabets");
}

inline Element linear_combine(Complex ca, const Element& a, Complex cb,
                              const Element& b,
                              const ScalarConfig& cfg = ScalarConfig{}) {
    require_same_alphabet(a, b);
    std::vector<Term> terms;
    terms.reserve(a.term_count() + b.term_count());
    for (const Term& t : a.terms()) terms.push_back(Term{ca * t.coeff, t.j, t.k});
    for (const Term& t : b.terms()) terms.push_back(Term{cb * t.coeff, t.j, t.k});
    return Element::from_terms(a.n(), std::move(terms), cfg);
}

// Word product: S_K^* S_A is S_T^* when K = A.T, S_T when A = K.T, else 0.
inline Element multiply(const Element& a, const Element& b,
                        const ScalarConfig& cfg = ScalarConfig{}) {
    require_same_alphabet(a, b);
    std::vector<Term> terms;
    for (const Term& s : a.terms()) {
        for (const Term& t : b.terms()) {
            if (is_prefix(s.k, t.j)) {
                Word tail(t.j.begin() + s.k.size(), t.j.end());
                terms.push_back(Term{s.coeff * t.coeff, concat(s.j, tail), t.k});
            } else if (is_prefix(t.j, s.k)) {
                Word tail(s.k.begin() + t.j.size(), s.k.end());
                terms.push_back(Term{s.coeff * t.coeff, s.j, concat(t.k, tail)});
            }
        }
    }
    return Element::from_terms(a.n(), std::move(terms), cfg);
}

inline Element adjoint(const Element& a,
                       const ScalarConfig& cfg = ScalarConfig{}) {
    std::vector<Term> terms;
    terms.reserve(a.term_count());
    for (const Term& t : a.terms())
        terms.push_back(Term{std::conj(t.coeff), t.k, t.j});
    return Element::from_terms(a.n(), std::move(terms), cfg);
}

// Largest coefficient deviation between the two elements after padding each
// degree group to a common level.
inline double max_abs_difference(const Element& a, const Element& b) {
    require_same_alphabet(a, b);
    std::vector<int> degrees = a.degrees();
    for (int d : b.degrees())
        if (std::find(degrees.begin(), degrees.end(), d) == degrees.end())
            degrees.push_back(d);

    double worst = 0.0;
    for (int d : degrees) {
        const std::size_t target = std::max(a.level(d), b.level(d));
        auto ta = degree_table_at_level(a, d, target);
        auto tb = degree_table_at_level(b, d, target);
        for (const auto& [key, c] : ta) {
            auto it = tb.find(key);
            const Complex other = it == tb.end() ? Complex(0.0) : it->second;
            worst = std::max(worst, std::abs(c - other));
        }
        for (const auto& [key, c] : tb)
            if (ta.find(key) == ta.end())
                worst = std::max(worst, std::abs(c));
    }
    return worst;
}

inline bool equals(const Element& a, const Element& b,
                   const ScalarConfig& cfg = ScalarConfig{}) {
    return max_abs_difference(a, b) <= cfg.equality_tol;
}

inline bool is_unitary(const Element& u,
                       const ScalarConfig& cfg = ScalarConfig{}) {
    const Element id = Element::one(u.n());
    return equals(multiply(u, adjoint(u, cfg), cfg), id, cfg) &&
           equals(multiply(adjoint(u, cfg), u, cfg), id, cfg);
}

// Projection onto gauge degree zero (the fixed point algebra part).
inline Element gauge_average(const Element& a,
                             const ScalarConfig& cfg = ScalarConfig{}) {
    std::vector<Term> terms;
    for (const Term& t : a.terms())
        if (t.degree() == 0) terms.push_back(t);
    return Element::from_terms(a.n(), std::move(terms), cfg);
}

// Canonical state: phi(S_J S_K^*) = [J = K] N^{-|J|}.
inline Complex phi(const Element& a) {
    Complex v(0.0, 0.0);
    for (const Term& t : a.terms()) {
        if (t.degree() != 0 || t.j != t.k) continue;
        v += t.coeff / static_cast<double>(ipow(a.n(), static_cast<unsigned>(
                                                           t.j.size())));
    }
    return v;
}

// Membership in the level-k slice of the gauge-invariant part. A stored
// form deeper than k still passes when it contracts to level k exactly.
inline bool lies_in_level(const Element& a, std::size_t k,
                          const ScalarConfig& cfg = ScalarConfig{}) {
    for (const Term& t : a.terms())
        if (t.degree() != 0) return false;
    if (a.level(0) <= k) return true;
    return reduced_degree_table(a, 0, k, cfg).has_value();
}

// Self-adjoint unitary implementing x -> sum_i S_i x S_i^*:
// F = sum_{i,j} S_{ij} S_{ji}^*.
inline Element flip_unitary(int n) {
    std::vector<Term> terms;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            terms.push_back(Term{Complex(1.0, 0.0),
                                 Word{static_cast<Letter>(i),
                                      static_cast<Letter>(j)},
                                 Word{static_cast<Letter>(j),
                                      static_cast<Letter>(i)}});
    return Element::from_terms(n, std::move(terms));
}

inline Element operator+(const Element& a, const Element& b) {
    return linear_combine(Complex(1.0), a, Complex(1.0), b);
}

inline Element operator-(const Element& a, const Element& b) {
    return linear_combine(Complex(1.0), a, Complex(-1.0), b);
}

inline Element operator*(const Element& a, const Element& b) {
    return multiply(a, b);
}

inline Element operator*(Complex c, const Element& a) {
    return linear_combine(c, a, Complex(0.0), Element::zero(a.n()));
}

inline bool operator==(const Element& a, const Element& b) {
    return equals(a, b);
}

namespace detail {

inline std::string format_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

inline std::string format_coeff(Complex c) {
    const bool has_re = std::abs(c.real()) >= 1e-12;
    const bool has_im = std::abs(c.imag()) >= 1e-12;
    if (has_re && has_im)
        return "(" + format_real(c.real()) + (c.imag() < 0 ? "-" : "+") +
               format_real(std::abs(c.imag())) + "i)";
    if (has_im) return format_real(c.imag()) + "i";
    return format_real(c.real());
}

// Undo fan expansion where a full fan of equal coefficients is present.
// Display only; the canonical form itself never contracts.
inline std::vector<Term> contract_for_display(int n, std::vector<Term> terms,
                                              double tol) {
    bool changed = true;
    while (changed) {
        changed = false;
        std::map<std::pair<Word, Word>, std::vector<std::size_t>> buckets;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const Term& t = terms[i];
            if (t.j.empty() || t.k.empty() || t.j.back() != t.k.back())
                continue;
            Word jp(t.j.begin(), t.j.end() - 1);
            Word kp(t.k.begin(), t.k.end() - 1);
            buckets[{std::move(jp), std::move(kp)}].push_back(i);
        }
        for (const auto& [key, idxs] : buckets) {
            if (idxs.size() != static_cast<std::size_t>(n)) continue;
            bool full = true;
            std::vector<bool> seen(n, false);
            for (std::size_t i : idxs) {
                const Letter last = terms[i].j.back();
                if (seen[last]) full = false;
                seen[last] = true;
                if (std::abs(terms[i].coeff - terms[idxs[0]].coeff) > tol)
                    full = false;
            }
            if (!full) continue;
            std::vector<Term> next;
            for (std::size_t i = 0; i < terms.size(); ++i)
                if (std::find(idxs.begin(), idxs.end(), i) == idxs.end())
                    next.push_back(terms[i]);
            next.push_back(Term{terms[idxs[0]].coeff, key.first, key.second});
            terms = std::move(next);
            changed = true;
            break;
        }
    }
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        if (a.j != b.j) return a.j < b.j;
        return a.k < b.k;
    });
    return terms;
}

}  // namespace detail

inline std::string term_to_string(const Term& t) {
    std::string s;
    const bool unit = std::abs(t.coeff - Complex(1.0)) < 1e-12;
    if (!unit || (t.j.empty() && t.k.empty()))
        s += detail::format_coeff(t.coeff);
    if (!t.j.empty()) {
        if (!s.empty()) s += " ";
        s += "S[" + word_to_string(t.j) + "]";
    }
    if (!t.k.empty()) {
        if (!s.empty() && t.j.empty()) s += " ";
        s += "S[" + word_to_string(t.k) + "]*";
    }
    return s;
}

inline std::string to_string(const Element& a, bool reduced = false,
                             const ScalarConfig& cfg = ScalarConfig{}) {
    if (a.is_zero()) return "0";
    std::vector<Term> terms = a.terms();
    if (reduced)
        terms = detail::contract_for_display(a.n(), std::move(terms),
                                             cfg.zero_tol);
    std::string s;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i) s += " + ";
        s += term_to_string(terms[i]);
    }
    return s;
}

}  // namespace cuntz

#endif  // CUNTZ_ELEMENT_HPP
