#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"

using namespace cuntz;

namespace {

Endomorphism squared_map(const std::vector<int>& orders) {
    return power(izumi_endomorphism(DualGroup::cyclic(orders)), 2);
}

std::vector<ComplexMatrix> matrix_units(std::size_t d) {
    std::vector<ComplexMatrix> units;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            ComplexMatrix u(d, d);
            u(i, j) = Complex(1.0);
            units.push_back(u);
        }
    return units;
}

}  // namespace

TEST_CASE("identity satisfies the pentagon equation") {
    for (int n : {2, 3, 4}) {
        const LegMatrix v =
            LegMatrix::wrap(n, ComplexMatrix::identity(
                                   static_cast<std::size_t>(n) * n));
        REQUIRE(pentagon_check(v));
        REQUIRE(pentagon_residual(v) < 1e-15);
    }
}

TEST_CASE("leg construction agrees with the directly indexed one") {
    std::mt19937_64 rng(oracle::test_seed() + 20);
    for (int n : {2, 3}) {
        const ComplexMatrix u =
            oracle::random_unitary(static_cast<std::size_t>(n) * n, rng);
        const LegMatrix v = LegMatrix::wrap(n, u);
        REQUIRE(std::abs(pentagon_residual(v) -
                         oracle::pentagon_residual_direct(n, u)) < 1e-12);
    }
}

TEST_CASE("extracted multiplicative unitaries pass the pentagon") {
    for (const std::vector<int>& orders :
         {std::vector<int>{2}, std::vector<int>{3}, std::vector<int>{4},
          std::vector<int>{2, 2}}) {
        const Endomorphism gamma = squared_map(orders);
        const LegMatrix w = extract_w_from(gamma);
        REQUIRE(pentagon_check(w));
        REQUIRE(oracle::pentagon_residual_direct(w.n, w.v) < 1e-9);
    }
}

TEST_CASE("the tensor flip fails the pentagon") {
    for (int n : {2, 3, 4}) {
        const LegMatrix flip = LegMatrix::wrap(n, flip_matrix(n));
        REQUIRE_FALSE(pentagon_check(flip));
        REQUIRE(pentagon_residual(flip) > 0.5);
    }
}

TEST_CASE("extracted W is the group translation") {
    for (const std::vector<int>& orders :
         {std::vector<int>{2}, std::vector<int>{3}}) {
        const DualGroup g = DualGroup::cyclic(orders);
        const oracle::LexGroup lex{orders};
        const LegMatrix w = extract_w_from(squared_map(orders));
        const std::size_t n = static_cast<std::size_t>(g.n());
        ComplexMatrix expected(n * n, n * n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t h = 0; h < n; ++h)
                expected(a * n + lex.add(static_cast<int>(h),
                                         static_cast<int>(a)),
                         a * n + h) = Complex(1.0);
        REQUIRE(max_abs_diff(w.v, expected) < 1e-12);
    }
}

TEST_CASE("both factor orders are reported") {
    // Peeling the flip off on the other side conjugates the translation by
    // the coordinate swap, leaving 2k = 0 as the pentagon obstruction. The
    // two orders therefore coincide exactly on exponent-2 groups.
    for (const std::vector<int>& orders :
         {std::vector<int>{2}, {3}, {4}, {2, 2}}) {
        const DualGroup g = DualGroup::cyclic(orders);
        const FactorOrderReport report =
            compare_factor_orders(squared_map(orders));
        CAPTURE(orders);
        REQUIRE(report.residual_u_flip < 1e-9);
        if (g.exponent() <= 2)
            REQUIRE(report.residual_flip_u < 1e-9);
        else
            REQUIRE(report.residual_flip_u > 0.5);
    }
}

TEST_CASE("extraction requires the shift intertwining relation") {
    REQUIRE_THROWS_AS(extract_w_from(Endomorphism::identity(2)),
                      ExtractionError);
}

TEST_CASE("round trip through the leg matrix") {
    const Endomorphism gamma = squared_map({2});
    const VfEndomorphism back = endomorphism_from_vf(extract_w_from(gamma));
    REQUIRE(back.pentagon_ok);
    REQUIRE(back.pentagon_residual < 1e-9);
    REQUIRE(equals(back.endo.unitary(), gamma.unitary()));
}

TEST_CASE("an arbitrary unitary still builds an endomorphism") {
    std::mt19937_64 rng(oracle::test_seed() + 21);
    const ComplexMatrix u = oracle::random_unitary(4, rng);
    const LegMatrix v = LegMatrix::wrap(2, u);
    const VfEndomorphism built = endomorphism_from_vf(v);
    // generic unitaries fail the pentagon but the endomorphism exists
    REQUIRE(is_unitary(built.endo.unitary()));
    REQUIRE(built.pentagon_residual ==
            Catch::Approx(pentagon_residual(v)).margin(1e-15));
}

TEST_CASE("elimination rank agrees with the singular value rank") {
    std::mt19937_64 rng(oracle::test_seed() + 22);
    std::uniform_int_distribution<std::size_t> dim_dist(2, 8);
    for (int it = 0; it < 30; ++it) {
        const std::size_t d = dim_dist(rng);
        std::uniform_int_distribution<std::size_t> rank_dist(0, d);
        const std::size_t r = rank_dist(rng);
        // product of d-by-r and r-by-d factors has rank exactly r
        std::normal_distribution<double> gauss(0.0, 1.0);
        ComplexMatrix m(d, d);
        if (r > 0) {
            ComplexMatrix left(d, r), right(r, d);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < r; ++j) {
                    left(i, j) = Complex(gauss(rng), gauss(rng));
                    right(j, i) = Complex(gauss(rng), gauss(rng));
                }
            m = left * right;
        }
        const RankResult result = rank_by_elimination(m);
        REQUIRE(result.rank == r);
        REQUIRE(result.rank == oracle::svd_rank(m));
    }
}

TEST_CASE("commutant of the full matrix algebra is the scalars") {
    const CommutantReport report = commutant_dimension(matrix_units(4));
    REQUIRE(report.commutant_dimension == 1);
    REQUIRE(report.ambient_dimension == 16);
    REQUIRE(report.generator_count == 16);
    REQUIRE(report.residual < 1e-9);
}

TEST_CASE("commutant of an amplified factor") {
    for (std::size_t d : {2, 3}) {
        std::vector<ComplexMatrix> right;
        for (const ComplexMatrix& u : matrix_units(d))
            right.push_back(kron(ComplexMatrix::identity(d), u));
        REQUIRE(commutant_dimension(right).commutant_dimension == d * d);
    }
}

TEST_CASE("commutant of the scalars is everything") {
    const CommutantReport report =
        commutant_dimension({ComplexMatrix::identity(3)});
    REQUIRE(report.commutant_dimension == 9);
}

TEST_CASE("relative commutant reference values") {
    REQUIRE(relative_commutant(canonical_shift(2), 1, 2)
                .commutant_dimension == 4);
    REQUIRE(relative_commutant(Endomorphism::identity(2), 1, 1)
                .commutant_dimension == 1);
    const Endomorphism gamma = squared_map({2});
    REQUIRE(relative_commutant(gamma, 1, 2).commutant_dimension == 4);
    REQUIRE(relative_commutant(gamma, 1, 3).commutant_dimension == 16);
}

TEST_CASE("relative commutant dimensions cross-checked by singular values") {
    // rebuild the stacked commutator system directly and rank it with Eigen
    const Endomorphism gamma = squared_map({2});
    for (std::size_t m : {2, 3}) {
        std::vector<ComplexMatrix> generators;
        for (const Word& j : all_words(2, 1))
            for (const Word& k : all_words(2, 1))
                generators.push_back(to_matrix(
                    apply(gamma, Element::monomial(2, Complex(1.0), j, k)),
                    m));
        const std::size_t d = generators.front().rows();
        ComplexMatrix stacked(generators.size() * d * d, d * d);
        std::size_t row = 0;
        for (const ComplexMatrix& a : generators)
            for (std::size_t p = 0; p < d; ++p)
                for (std::size_t q = 0; q < d; ++q, ++row)
                    for (std::size_t v = 0; v < d; ++v) {
                        stacked(row, p * d + v) += a(v, q);
                        stacked(row, v * d + q) -= a(p, v);
                    }
        const std::size_t dim = d * d - oracle::svd_rank(stacked);
        REQUIRE(relative_commutant(gamma, 1, m).commutant_dimension == dim);
    }
}

TEST_CASE("relative commutant needs a level that fits the images") {
    REQUIRE_THROWS_AS(relative_commutant(squared_map({2}), 1, 1),
                      ValidationError);
    REQUIRE_THROWS_AS(relative_commutant(canonical_shift(2), 0, 2),
                      ValidationError);
}

TEST_CASE("leg matrices must be square unitaries of matching size") {
    REQUIRE_THROWS_AS(LegMatrix::wrap(2, ComplexMatrix::identity(3)),
                      ValidationError);
    ComplexMatrix not_unitary(4, 4);
    not_unitary(0, 0) = Complex(2.0);
    REQUIRE_THROWS_AS(LegMatrix::wrap(2, not_unitary), ValidationError);
}
