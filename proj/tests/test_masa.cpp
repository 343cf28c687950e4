#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"

using namespace cuntz;

namespace {

Endomorphism twisted_map(const DualGroup& g) {
    return compose(izumi_endomorphism(g), fourier_automorphism(g));
}

}  // namespace

TEST_CASE("cylinder images of the twisted map stay diagonal") {
    const DualGroup z2 = DualGroup::cyclic({2});
    const CylinderImage img = image_of_cylinder(twisted_map(z2), {0});
    REQUIRE(img.ok);
    REQUIRE(img.words == std::vector<Word>{{0, 0}, {1, 1}});
}

TEST_CASE("cylinder images of the squared map stay diagonal") {
    const DualGroup z2 = DualGroup::cyclic({2});
    const CylinderImage img =
        image_of_cylinder(power(izumi_endomorphism(z2), 2), {0, 1});
    REQUIRE(img.ok);
    REQUIRE(img.words == std::vector<Word>{{0, 0, 1}, {1, 1, 0}});
}

TEST_CASE("the base map leaves the diagonal with an explicit witness") {
    const DualGroup z2 = DualGroup::cyclic({2});
    const Endomorphism rho = izumi_endomorphism(z2);
    const MasaReport report = check_masa_invariant(rho, 1);
    REQUIRE_FALSE(report.ok);
    REQUIRE(report.cylinder == Word{0});
    REQUIRE(report.failure.witness.j == Word{0});
    REQUIRE(report.failure.witness.k == Word{1});
    REQUIRE(std::abs(report.failure.witness.coeff - Complex(0.5)) < 1e-12);
}

TEST_CASE("diagonal preservation holds to depth for twisted and squared maps") {
    for (const std::vector<int>& orders :
         {std::vector<int>{2}, std::vector<int>{3}, std::vector<int>{2, 2}}) {
        const DualGroup g = DualGroup::cyclic(orders);
        REQUIRE(check_masa_invariant(twisted_map(g), 3).ok);
        REQUIRE(check_masa_invariant(power(izumi_endomorphism(g), 2), 3).ok);
    }
}

TEST_CASE("extracted rules match the closed forms") {
    for (const std::vector<int>& orders :
         {std::vector<int>{2}, std::vector<int>{3}, std::vector<int>{4},
          std::vector<int>{2, 2}}) {
        const DualGroup g = DualGroup::cyclic(orders);
        const LocalRule tw = extract_local_rule(twisted_map(g), 4);
        REQUIRE(tw.lookahead == 1);
        REQUIRE(tw.depth == 4);
        REQUIRE(rules_equal(tw, closed_form_rule(RuleKind::difference, g), 4));
        const LocalRule sq =
            extract_local_rule(power(izumi_endomorphism(g), 2), 4);
        REQUIRE(sq.lookahead == 1);
        REQUIRE(rules_equal(
            sq, closed_form_rule(RuleKind::anchored_difference, g), 4));
        REQUIRE_FALSE(rules_equal(tw, closed_form_rule(RuleKind::shift, g), 4));
    }
}

TEST_CASE("the canonical shift extracts as the shift rule") {
    const LocalRule rule = extract_local_rule(canonical_shift(2), 4);
    REQUIRE(rule.lookahead == 1);
    REQUIRE(rules_equal(rule,
                        closed_form_rule(RuleKind::shift, DualGroup::cyclic({2})),
                        4));
}

TEST_CASE("identity extracts with zero lookahead") {
    const LocalRule rule = extract_local_rule(Endomorphism::identity(2), 3);
    REQUIRE(rule.lookahead == 0);
    for (const Word& w : all_words(2, 2)) REQUIRE(apply_rule(rule, w) == w);
}

TEST_CASE("extraction refuses maps that move the diagonal") {
    const DualGroup z2 = DualGroup::cyclic({2});
    REQUIRE_THROWS_AS(extract_local_rule(izumi_endomorphism(z2), 2),
                      ExtractionError);
}

TEST_CASE("rule application respects its tables and depth") {
    const DualGroup z3 = DualGroup::cyclic({3});
    const LocalRule rule = closed_form_rule(RuleKind::difference, z3, 3);
    // (Tw)_k = w_{k+1} - w_k elementwise
    REQUIRE(apply_rule(rule, {1, 2, 0}) == Word{1, 1});
    REQUIRE(apply_rule(rule, {2, 2}) == Word{0});
    REQUIRE_THROWS_AS(apply_rule(rule, {0}), DepthError);       // empty output
    REQUIRE_THROWS_AS(apply_rule(rule, {0, 0, 0, 0, 0}), DepthError);
    REQUIRE_THROWS_AS(apply_rule(rule, {3, 0}), ValidationError);
}

TEST_CASE("anchored rule subtracts the first letter") {
    const DualGroup z4 = DualGroup::cyclic({4});
    const LocalRule rule =
        closed_form_rule(RuleKind::anchored_difference, z4, 3);
    // (Tw)_k = w_{k+1} - w_1
    REQUIRE(apply_rule(rule, {1, 2, 3}) == Word{1, 2});
    REQUIRE(apply_rule(rule, {3, 0}) == Word{1});
}

TEST_CASE("rule outputs are prefix coherent") {
    for (RuleKind kind : {RuleKind::shift, RuleKind::difference,
                          RuleKind::anchored_difference}) {
        const LocalRule rule =
            closed_form_rule(kind, DualGroup::cyclic({3}), 4);
        for (const Word& w : all_words(3, 4)) {
            const Word full = apply_rule(rule, w);
            Word shorter(w.begin(), w.end() - 1);
            const Word partial = apply_rule(rule, shorter);
            REQUIRE(is_prefix(partial, full));
        }
    }
}

TEST_CASE("anchored differences and anchored sums agree only at exponent two") {
    for (const std::vector<int>& orders :
         {std::vector<int>{2}, std::vector<int>{3}, std::vector<int>{4},
          std::vector<int>{2, 2}}) {
        const DualGroup g = DualGroup::cyclic(orders);
        const LocalRule diff =
            closed_form_rule(RuleKind::anchored_difference, g, 3);
        const LocalRule sum = rule_from_letter_map(
            g.n(), 1, 3,
            [&g](const Word& w) {
                Word out(w.size() - 1);
                for (std::size_t i = 0; i + 1 < w.size(); ++i)
                    out[i] = static_cast<Letter>(g.add(w[0], w[i + 1]));
                return out;
            },
            "closed-form", "anchored-sum");
        REQUIRE(rules_equal(diff, sum, 3) == (g.exponent() <= 2));
    }
}

TEST_CASE("rule comparison guards alphabet and depth") {
    const LocalRule a = closed_form_rule(RuleKind::shift, DualGroup::cyclic({2}), 3);
    const LocalRule b = closed_form_rule(RuleKind::shift, DualGroup::cyclic({3}), 3);
    REQUIRE_THROWS_AS(rules_equal(a, b, 2), AlphabetMismatch);
    REQUIRE_THROWS_AS(
        rules_equal(a, closed_form_rule(RuleKind::shift, DualGroup::cyclic({2}), 2), 3),
        DepthError);
}

TEST_CASE("extraction matches direct cylinder evaluation") {
    // the rule inverts the cylinder partition: the image of [j] is the union
    // of the cylinders the rule sends onto j
    const DualGroup z2 = DualGroup::cyclic({2});
    const Endomorphism gamma = power(izumi_endomorphism(z2), 2);
    const LocalRule rule = extract_local_rule(gamma, 3);
    for (std::size_t len = 1; len <= 2; ++len) {
        for (const Word& j : all_words(2, len)) {
            const CylinderImage img = image_of_cylinder(gamma, j);
            REQUIRE(img.ok);
            std::set<Word> from_rule;
            for (const Word& w : all_words(2, len + 1))
                if (apply_rule(rule, w) == j) from_rule.insert(w);
            REQUIRE(from_rule == std::set<Word>(img.words.begin(),
                                                img.words.end()));
        }
    }
}

TEST_CASE("word permutation maps extract at their block lookahead") {
    // sigma(j1 j2) = (j2 - j1, j2) extracts with lookahead 1 and equals the
    // difference rule
    const DualGroup z3 = DualGroup::cyclic({3});
    PermutationSpec spec;
    spec.k = 2;
    spec.sigma.resize(9);
    for (int j1 = 0; j1 < 3; ++j1)
        for (int j2 = 0; j2 < 3; ++j2)
            spec.sigma[static_cast<std::size_t>(j1) * 3 + j2] =
                static_cast<std::uint64_t>(z3.subtract(j2, j1)) * 3 + j2;
    const Endomorphism endo = permutation_endomorphism(3, spec);
    const LocalRule rule = extract_local_rule(endo, 3);
    REQUIRE(rule.lookahead == 1);
    REQUIRE(rules_equal(rule, closed_form_rule(RuleKind::difference, z3), 3));
}
