#ifndef CUNTZ_MASA_HPP
#define CUNTZ_MASA_HPP

#include <functional>

#include "endomorphism.hpp"

namespace cuntz {

// Outcome of pushing one cylinder projection S_J S_J^* through an
// endomorphism. Success means the image is again a sum of distinct cylinder
// projections, listed in `words`; otherwise `witness` is an offending term,
// preferring an off-diagonal one over a diagonal term with non-unit weight.
struct CylinderImage {
    bool ok = false;
    std::vector<Word> words;
    Term witness;
    std::string message;
};

inline CylinderImage image_of_cylinder(const Endomorphism& rho, const Word& j,
                                       const ScalarConfig& cfg = ScalarConfig{}) {
    if (j.empty()) throw ValidationError("cylinder word must be nonempty");
    const Element image =
        apply(rho, Element::monomial(rho.n(), Complex(1.0), j, j), cfg);
    // Undo fan padding so witnesses and cylinder words come out at their
    // natural length.
    const std::vector<Term> terms =
        detail::contract_for_display(rho.n(), image.terms(), cfg.zero_tol);

    CylinderImage result;
    const Term* bad_diagonal = nullptr;
    for (const Term& t : terms) {
        if (t.j != t.k) {
            result.witness = t;
            result.message = "off-diagonal term " + term_to_string(t);
            return result;
        }
        if (std::abs(t.coeff - Complex(1.0)) > cfg.equality_tol &&
            bad_diagonal == nullptr)
            bad_diagonal = &t;
    }
    if (bad_diagonal != nullptr) {
        result.witness = *bad_diagonal;
        result.message =
            "non-unit weight on " + term_to_string(*bad_diagonal);
        return result;
    }
    result.ok = true;
    for (const Term& t : terms) result.words.push_back(t.j);
    return result;
}

struct MasaReport {
    bool ok = true;
    Word cylinder;
    CylinderImage failure;
};

// The diagonal subalgebra is preserved iff every cylinder maps to a sum of
// cylinders. Checked exhaustively for all words up to the given length.
inline MasaReport check_masa_invariant(const Endomorphism& rho, int depth,
                                       const ScalarConfig& cfg = ScalarConfig{}) {
    if (depth < 1) throw ValidationError("depth must be at least 1");
    for (int len = 1; len <= depth; ++len) {
        for (const Word& j : all_words(rho.n(), len)) {
            CylinderImage image = image_of_cylinder(rho, j, cfg);
            if (!image.ok)
                return MasaReport{false, j, std::move(image)};
        }
    }
    return MasaReport{};
}

// Prefix-determined self-map of the one-sided sequence space: the first n
// output letters depend only on the first n+r input letters. tables[n-1]
// maps the index of a length-(n+r) word to its length-n image.
struct LocalRule {
    int n = 2;
    int lookahead = 0;
    int depth = 0;
    std::vector<std::vector<Word>> tables;
    std::string provenance;
    std::string closed_form;
};

inline Word apply_rule(const LocalRule& rule, const Word& w) {
    if (!word_valid(w, rule.n))
        throw ValidationError("word uses letters outside the rule alphabet");
    const int out_len = static_cast<int>(w.size()) - rule.lookahead;
    if (out_len < 1 || out_len > rule.depth)
        throw DepthError("rule tables do not cover this input length");
    return rule.tables[out_len - 1][word_index(w, rule.n)];
}

inline LocalRule rule_from_letter_map(
    int n, int lookahead, int depth,
    const std::function<Word(const Word&)>& map, std::string provenance,
    std::string closed_form = {}) {
    if (n < 2 || lookahead < 0 || depth < 1)
        throw ValidationError("bad rule shape");
    LocalRule rule;
    rule.n = n;
    rule.lookahead = lookahead;
    rule.depth = depth;
    rule.provenance = std::move(provenance);
    rule.closed_form = std::move(closed_form);
    for (int len = 1; len <= depth; ++len) {
        std::vector<Word> table;
        const std::uint64_t count =
            ipow(n, static_cast<unsigned>(len + lookahead));
        table.reserve(count);
        for (std::uint64_t i = 0; i < count; ++i) {
            Word out = map(word_at(i, len + lookahead, n));
            if (out.size() != static_cast<std::size_t>(len) ||
                !word_valid(out, n))
                throw ValidationError("letter map output has the wrong shape");
            table.push_back(std::move(out));
        }
        rule.tables.push_back(std::move(table));
    }
    return rule;
}

namespace detail {

constexpr std::uint64_t kUnassigned = ~std::uint64_t{0};

inline bool contract_one_level(std::vector<std::uint64_t>& assign, int n) {
    const std::size_t blocks = assign.size() / n;
    std::vector<std::uint64_t> next(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::uint64_t v = assign[b * n];
        for (int a = 1; a < n; ++a)
            if (assign[b * n + a] != v) return false;
        next[b] = v;
    }
    assign = std::move(next);
    return true;
}

}  // namespace detail

// Recovers the sequence-space map T from an endomorphism that preserves the
// diagonal: the image of the projection onto [J] is the projection onto
// T^{-1}[J], so the cylinder images of all |J| = n must tile the words of
// some length and the tiling inverts to a table. The lookahead is the least
// r (at most max_lookahead) under which every table is prefix-determined.
inline LocalRule extract_local_rule(const Endomorphism& rho, int depth,
                                    const ScalarConfig& cfg = ScalarConfig{},
                                    int max_lookahead = 3) {
    if (depth < 1) throw ValidationError("depth must be at least 1");
    const int n = rho.n();

    // Per output length: assignment of input-word index to cylinder index,
    // contracted to its minimal input length (floor: output length).
    std::vector<std::vector<std::uint64_t>> assigns(depth);
    std::vector<int> input_len(depth);
    int lookahead = 0;

    for (int len = 1; len <= depth; ++len) {
        const std::uint64_t cylinders =
            ipow(n, static_cast<unsigned>(len));
        std::vector<std::vector<Word>> images(cylinders);
        std::size_t natural = 0;
        for (std::uint64_t c = 0; c < cylinders; ++c) {
            const Word j = word_at(c, len, n);
            CylinderImage image = image_of_cylinder(rho, j, cfg);
            if (!image.ok)
                throw ExtractionError("cylinder [" + word_to_string(j) +
                                      "] maps outside the diagonal: " +
                                      image.message);
            for (const Word& w : image.words)
                natural = std::max(natural, w.size());
            images[c] = std::move(image.words);
        }

        std::vector<std::uint64_t> assign(
            ipow(n, static_cast<unsigned>(natural)), detail::kUnassigned);
        for (std::uint64_t c = 0; c < cylinders; ++c) {
            for (const Word& w : images[c]) {
                const std::uint64_t fan =
                    ipow(n, static_cast<unsigned>(natural - w.size()));
                const std::uint64_t base = word_index(w, n) * fan;
                for (std::uint64_t e = 0; e < fan; ++e) {
                    if (assign[base + e] != detail::kUnassigned)
                        throw ExtractionError(
                            "word " +
                            word_to_string(word_at(base + e, natural, n)) +
                            " claimed by two cylinders");
                    assign[base + e] = c;
                }
            }
        }
        for (std::uint64_t i = 0; i < assign.size(); ++i)
            if (assign[i] == detail::kUnassigned)
                throw ExtractionError(
                    "word " + word_to_string(word_at(i, natural, n)) +
                    " claimed by no cylinder");

        int in_len = static_cast<int>(natural);
        while (in_len > len && detail::contract_one_level(assign, n))
            --in_len;
        if (in_len < len) {
            // Image words shorter than the cylinder; widen to lookahead 0.
            const std::uint64_t fan =
                ipow(n, static_cast<unsigned>(len - in_len));
            std::vector<std::uint64_t> wide(assign.size() * fan);
            for (std::uint64_t i = 0; i < wide.size(); ++i)
                wide[i] = assign[i / fan];
            assign = std::move(wide);
            in_len = len;
        }
        lookahead = std::max(lookahead, in_len - len);
        assigns[len - 1] = std::move(assign);
        input_len[len - 1] = in_len;
    }

    if (lookahead > max_lookahead)
        throw ExtractionError("rule needs lookahead " +
                              std::to_string(lookahead) + ", beyond the bound " +
                              std::to_string(max_lookahead));

    LocalRule rule;
    rule.n = n;
    rule.lookahead = lookahead;
    rule.depth = depth;
    rule.provenance = "extracted";
    for (int len = 1; len <= depth; ++len) {
        const std::uint64_t fan = ipow(
            n, static_cast<unsigned>(len + lookahead - input_len[len - 1]));
        const std::uint64_t count =
            ipow(n, static_cast<unsigned>(len + lookahead));
        std::vector<Word> table;
        table.reserve(count);
        for (std::uint64_t i = 0; i < count; ++i)
            table.push_back(word_at(assigns[len - 1][i / fan],
                                    static_cast<std::size_t>(len), n));
        rule.tables.push_back(std::move(table));
    }

    // Longer windows must refine shorter ones.
    for (int len = 1; len < depth; ++len) {
        const std::uint64_t count =
            ipow(n, static_cast<unsigned>(len + 1 + lookahead));
        for (std::uint64_t i = 0; i < count; ++i) {
            const Word w = word_at(i, len + 1 + lookahead, n);
            const Word& longer = rule.tables[len][i];
            const Word prefix(w.begin(), w.end() - 1);
            const Word& shorter =
                rule.tables[len - 1][word_index(prefix, n)];
            if (!is_prefix(shorter, longer))
                throw ExtractionError("rule images of " + word_to_string(w) +
                                      " are not prefix-coherent");
        }
    }
    return rule;
}

enum class RuleKind { shift, difference, anchored_difference };

inline const char* rule_kind_name(RuleKind kind) {
    switch (kind) {
        case RuleKind::shift: return "shift";
        case RuleKind::difference: return "difference";
        case RuleKind::anchored_difference: return "anchored-difference";
    }
    throw ValidationError("unknown rule kind");
}

// The three letter-local maps the endomorphisms here induce on sequences:
// plain shift, successive differences, differences against the first letter.
// All have lookahead 1 and use the group structure on the alphabet.
template <typename GroupLike>
inline LocalRule closed_form_rule(RuleKind kind, const GroupLike& g,
                                  int depth = 4) {
    auto map = [kind, &g](const Word& w) {
        Word out(w.size() - 1);
        for (std::size_t i = 0; i + 1 < w.size(); ++i) {
            switch (kind) {
                case RuleKind::shift:
                    out[i] = w[i + 1];
                    break;
                case RuleKind::difference:
                    out[i] = static_cast<Letter>(g.subtract(w[i + 1], w[i]));
                    break;
                case RuleKind::anchored_difference:
                    out[i] = static_cast<Letter>(g.subtract(w[i + 1], w[0]));
                    break;
            }
        }
        return out;
    };
    return rule_from_letter_map(g.n(), 1, depth, map, "closed-form",
                                rule_kind_name(kind));
}

// Semantic comparison: the rules agree on every window up to `depth`, seen
// through the wider of the two lookaheads.
inline bool rules_equal(const LocalRule& a, const LocalRule& b, int depth) {
    if (a.n != b.n)
        throw AlphabetMismatch("rules live over different alphabets");
    if (a.depth < depth || b.depth < depth)
        throw DepthError("rule tables shallower than the comparison depth");
    const int r = std::max(a.lookahead, b.lookahead);
    for (int len = 1; len <= depth; ++len) {
        const std::uint64_t count =
            ipow(a.n, static_cast<unsigned>(len + r));
        for (std::uint64_t i = 0; i < count; ++i) {
            const Word w = word_at(i, len + r, a.n);
            const Word wa(w.begin(), w.begin() + len + a.lookahead);
            const Word wb(w.begin(), w.begin() + len + b.lookahead);
            if (apply_rule(a, wa) != apply_rule(b, wb)) return false;
        }
    }
    return true;
}

}  // namespace cuntz

#endif  // CUNTZ_MASA_HPP
