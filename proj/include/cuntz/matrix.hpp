#ifndef CUNTZ_MATRIX_HPP
#define CUNTZ_MATRIX_HPP

#include <algorithm>
#include <cmath>

#include "element.hpp"

namespace cuntz {

// Dense row-major complex matrix. Small sizes only; everything here is
// exhaustive rather than clever.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Complex(0.0)) {}

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = Complex(1.0);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex& operator()(std::size_t r, std::size_t c) {
        return data_[r * cols_ + c];
    }
    const Complex& operator()(std::size_t r, std::size_t c) const {
        return data_[r * cols_ + c];
    }

    const std::vector<Complex>& data() const { return data_; }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

inline ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows())
        throw ValidationError("matrix product dimensions do not match");
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex(0.0)) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                c(i, j) += aik * b(k, j);
        }
    return c;
}

inline ComplexMatrix adjoint(const ComplexMatrix& a) {
    ComplexMatrix c(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            c(j, i) = std::conj(a(i, j));
    return c;
}

inline ComplexMatrix operator*(const ComplexMatrix& a,
                               const ComplexMatrix& b) {
    return multiply(a, b);
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ValidationError("matrix comparison dimensions do not match");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    return worst;
}

inline bool matrix_is_unitary(const ComplexMatrix& m,
                              const ScalarConfig& cfg = ScalarConfig{}) {
    if (m.rows() != m.cols()) return false;
    const ComplexMatrix id = ComplexMatrix::identity(m.rows());
    return max_abs_diff(multiply(m, adjoint(m)), id) <= cfg.equality_tol &&
           max_abs_diff(multiply(adjoint(m), m), id) <= cfg.equality_tol;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (a(i, j) == Complex(0.0)) continue;
            for (std::size_t p = 0; p < b.rows(); ++p)
                for (std::size_t q = 0; q < b.cols(); ++q)
                    c(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
        }
    return c;
}

struct RankResult {
    std::size_t rank = 0;
    // Largest entry left in the eliminated remainder, a health check on the
    // pivot threshold: values near the threshold mean the rank is fragile.
    double residual = 0.0;
};

// Gaussian elimination with full pivoting. Entries below pivot_tol never
// become pivots.
inline RankResult rank_by_elimination(ComplexMatrix m,
                                      double pivot_tol = 1e-7) {
    if (!(pivot_tol > 0.0))
        throw ValidationError("pivot threshold must be positive");
    const std::size_t steps = std::min(m.rows(), m.cols());
    RankResult result;
    std::size_t step = 0;
    for (; step < steps; ++step) {
        std::size_t pr = step, pc = step;
        double best = 0.0;
        for (std::size_t i = step; i < m.rows(); ++i)
            for (std::size_t j = step; j < m.cols(); ++j)
                if (std::abs(m(i, j)) > best) {
                    best = std::abs(m(i, j));
                    pr = i;
                    pc = j;
                }
        if (best < pivot_tol) {
            result.residual = best;
            break;
        }
        if (pr != step)
            for (std::size_t j = 0; j < m.cols(); ++j)
                std::swap(m(step, j), m(pr, j));
        if (pc != step)
            for (std::size_t i = 0; i < m.rows(); ++i)
                std::swap(m(i, step), m(i, pc));
        for (std::size_t i = step + 1; i < m.rows(); ++i) {
            const Complex factor = m(i, step) / m(step, step);
            if (factor == Complex(0.0)) continue;
            for (std::size_t j = step; j < m.cols(); ++j)
                m(i, j) -= factor * m(step, j);
        }
        ++result.rank;
    }
    return result;
}

// Matrix picture of a gauge degree zero element at K-length `level`:
// S_J S_K^* becomes the unit e_{J,K} in the N^level square matrix algebra.
// Stored forms deeper than `level` are contracted first when possible.
inline ComplexMatrix to_matrix(const Element& e, std::size_t level,
                               const ScalarConfig& cfg = ScalarConfig{}) {
    for (const Term& t : e.terms())
        if (t.degree() != 0)
            throw RepresentationError(
                "element has nonzero gauge degree, no matrix picture");
    const auto table = reduced_degree_table(e, 0, level, cfg);
    if (!table)
        throw RepresentationError(
            "element lives deeper than the requested matrix level");
    const std::uint64_t dim = ipow(e.n(), static_cast<unsigned>(level));
    ComplexMatrix m(dim, dim);
    for (const auto& [key, c] : *table)
        m(word_index(key.first, e.n()), word_index(key.second, e.n())) += c;
    return m;
}

inline Element from_matrix(const ComplexMatrix& m, int n,
                           const ScalarConfig& cfg = ScalarConfig{}) {
    if (m.rows() != m.cols())
        throw ValidationError("only square matrices embed");
    std::size_t level = 0;
    std::uint64_t dim = 1;
    while (dim < m.rows()) {
        dim *= static_cast<std::uint64_t>(n);
        ++level;
    }
    if (dim != m.rows())
        throw ValidationError(
            "matrix dimension is not a power of the alphabet size");
    std::vector<Term> terms;
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (m(r, c) != Complex(0.0))
                terms.push_back(Term{m(r, c), word_at(r, level, n),
                                     word_at(c, level, n)});
    return Element::from_terms(n, std::move(terms), cfg);
}

}  // namespace cuntz

#endif  // CUNTZ_MATRIX_HPP
