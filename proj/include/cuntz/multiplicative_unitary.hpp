#ifndef CUNTZ_MULTIPLICATIVE_UNITARY_HPP
#define CUNTZ_MULTIPLICATIVE_UNITARY_HPP

#include "endomorphism.hpp"

namespace cuntz {

// Unitary on a two-fold tensor square, stored as an N^2 by N^2 matrix with
// row/column index (i,j) = i*N + j.
struct LegMatrix {
    int n = 2;
    ComplexMatrix v;

    static LegMatrix wrap(int n, ComplexMatrix m,
                          const ScalarConfig& cfg = ScalarConfig{}) {
        if (n < 2) throw ValidationError("tensor factor dimension below 2");
        const std::size_t nn = static_cast<std::size_t>(n) * n;
        if (m.rows() != nn || m.cols() != nn)
            throw ValidationError("leg matrix must be N^2 by N^2");
        if (!matrix_is_unitary(m, cfg))
            throw ValidationError("leg matrix is not unitary");
        return LegMatrix{n, std::move(m)};
    }
};

// e_{(i,j)} -> e_{(j,i)}.
inline ComplexMatrix flip_matrix(int n) {
    const std::size_t nn = static_cast<std::size_t>(n) * n;
    ComplexMatrix f(nn, nn);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            f(static_cast<std::size_t>(j) * n + i,
              static_cast<std::size_t>(i) * n + j) = Complex(1.0);
    return f;
}

inline ComplexMatrix leg_12(const LegMatrix& v) {
    return kron(v.v, ComplexMatrix::identity(v.n));
}

inline ComplexMatrix leg_23(const LegMatrix& v) {
    return kron(ComplexMatrix::identity(v.n), v.v);
}

inline ComplexMatrix leg_13(const LegMatrix& v) {
    const std::size_t n = v.n;
    ComplexMatrix m(n * n * n, n * n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t ip = 0; ip < n; ++ip)
                for (std::size_t kp = 0; kp < n; ++kp) {
                    const Complex entry = v.v(i * n + k, ip * n + kp);
                    if (entry == Complex(0.0)) continue;
                    for (std::size_t j = 0; j < n; ++j)
                        m((i * n + j) * n + k, (ip * n + j) * n + kp) = entry;
                }
    return m;
}

inline double pentagon_residual(const LegMatrix& v) {
    const ComplexMatrix lhs =
        multiply(multiply(leg_12(v), leg_13(v)), leg_23(v));
    const ComplexMatrix rhs = multiply(leg_23(v), leg_12(v));
    return max_abs_diff(lhs, rhs);
}

inline bool pentagon_check(const LegMatrix& v,
                           const ScalarConfig& cfg = ScalarConfig{}) {
    return pentagon_residual(v) <= cfg.equality_tol;
}

// Splits the associated unitary of a shift square root as W * flip. Wants
// the unitary inside the level-2 slice and the square relation to hold.
inline LegMatrix extract_w_from(const Endomorphism& gamma,
                                const ScalarConfig& cfg = ScalarConfig{}) {
    if (!lies_in_level(gamma.unitary(), 2))
        throw ExtractionError(
            "associated unitary lives outside the level-2 slice");
    if (!check_square_root_relation(gamma, cfg))
        throw ExtractionError(
            "endomorphism does not square to its shifted self");
    const ComplexMatrix w =
        multiply(to_matrix(gamma.unitary(), 2), flip_matrix(gamma.n()));
    return LegMatrix::wrap(gamma.n(), w, cfg);
}

// Pentagon residuals for both ways of peeling the flip off the associated
// unitary. The U*flip order is the one extract_w_from commits to.
struct FactorOrderReport {
    double residual_u_flip = 0.0;
    double residual_flip_u = 0.0;
};

inline FactorOrderReport compare_factor_orders(
    const Endomorphism& gamma, const ScalarConfig& cfg = ScalarConfig{}) {
    if (!lies_in_level(gamma.unitary(), 2))
        throw ExtractionError(
            "associated unitary lives outside the level-2 slice");
    const ComplexMatrix u = to_matrix(gamma.unitary(), 2);
    const ComplexMatrix f = flip_matrix(gamma.n());
    FactorOrderReport report;
    report.residual_u_flip =
        pentagon_residual(LegMatrix::wrap(gamma.n(), multiply(u, f), cfg));
    report.residual_flip_u =
        pentagon_residual(LegMatrix::wrap(gamma.n(), multiply(f, u), cfg));
    return report;
}

struct VfEndomorphism {
    Endomorphism endo;
    bool pentagon_ok = false;
    double pentagon_residual = 0.0;
};

// Endomorphism of the unitary V * flip. Accepts V failing the pentagon
// equation so negative controls can be run; the flag records the outcome.
inline VfEndomorphism endomorphism_from_vf(
    const LegMatrix& v, const ScalarConfig& cfg = ScalarConfig{}) {
    const double residual = cuntz::pentagon_residual(v);
    const Element u =
        from_matrix(multiply(v.v, flip_matrix(v.n)), v.n, cfg);
    return VfEndomorphism{Endomorphism::from_unitary(u, cfg),
                          residual <= cfg.equality_tol, residual};
}

struct CommutantReport {
    std::size_t generator_count = 0;
    std::size_t ambient_dimension = 0;
    std::size_t commutant_dimension = 0;
    double residual = 0.0;
};

// Dimension of {X : XA = AX for every generator A}, as the null space of
// the stacked commutator map on matrix entries. The threshold separates
// the exact zero singular values from the O(1) spectrum these desk-scale
// problems have; the residual reports the largest entry it discarded.
inline CommutantReport commutant_dimension(
    const std::vector<ComplexMatrix>& generators, double pivot_tol = 1e-7) {
    if (generators.empty())
        throw ValidationError("commutant of an empty family is everything");
    const std::size_t d = generators[0].rows();
    for (const ComplexMatrix& a : generators)
        if (a.rows() != d || a.cols() != d)
            throw ValidationError("generators must be square and equal-sized");

    const std::size_t dd = d * d;
    ComplexMatrix stacked(generators.size() * dd, dd);
    for (std::size_t g = 0; g < generators.size(); ++g) {
        const ComplexMatrix& a = generators[g];
        for (std::size_t p = 0; p < d; ++p)
            for (std::size_t q = 0; q < d; ++q) {
                const std::size_t row = g * dd + p * d + q;
                // (XA - AX)_{pq} depends on X_{uv} through A_{vq} when
                // u = p and through -A_{pu} when v = q.
                for (std::size_t v = 0; v < d; ++v)
                    stacked(row, p * d + v) += a(v, q);
                for (std::size_t u = 0; u < d; ++u)
                    stacked(row, u * d + q) -= a(p, u);
            }
    }
    const RankResult rank = rank_by_elimination(std::move(stacked), pivot_tol);
    CommutantReport report;
    report.generator_count = generators.size();
    report.ambient_dimension = dd;
    report.commutant_dimension = dd - rank.rank;
    report.residual = rank.residual;
    return report;
}

// Commutant of the endomorphic image of the level-k matrix units inside the
// level-m matrix algebra.
inline CommutantReport relative_commutant(
    const Endomorphism& rho, int k, int m, double pivot_tol = 1e-7,
    const ScalarConfig& cfg = ScalarConfig{}) {
    if (k < 1 || m < 1) throw ValidationError("levels must be positive");
    std::vector<ComplexMatrix> generators;
    const std::vector<Word> words = all_words(rho.n(), k);
    for (const Word& j : words)
        for (const Word& kk : words) {
            const Element unit =
                Element::monomial(rho.n(), Complex(1.0), j, kk);
            try {
                generators.push_back(to_matrix(apply(rho, unit, cfg), m));
            } catch (const RepresentationError& e) {
                throw ValidationError(
                    std::string("image does not fit the target level: ") +
                    e.what());
            }
        }
    return commutant_dimension(generators, pivot_tol);
}

}  // namespace cuntz

#endif  // CUNTZ_MULTIPLICATIVE_UNITARY_HPP
