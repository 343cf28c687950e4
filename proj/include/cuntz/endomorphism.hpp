#ifndef CUNTZ_ENDOMORPHISM_HPP
#define CUNTZ_ENDOMORPHISM_HPP

#include <functional>

#include "matrix.hpp"

namespace cuntz {

// g_i^* g_j = [i = j] and the range projections sum to 1.
inline void require_cuntz_family(int n, const std::vector<Element>& images,
                                 const ScalarConfig& cfg = ScalarConfig{}) {
    if (images.size() != static_cast<std::size_t>(n))
        throw ValidationError("expected one generator image per letter");
    const Element id = Element::one(n);
    Element range_sum = Element::zero(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Element p = multiply(adjoint(images[i], cfg), images[j], cfg);
            const Element expected =
                i == j ? id : Element::zero(n);
            if (!equals(p, expected, cfg))
                throw ValidationError(
                    "generator images violate the isometry relations");
        }
        range_sum = linear_combine(
            Complex(1.0), range_sum, Complex(1.0),
            multiply(images[i], adjoint(images[i], cfg), cfg), cfg);
    }
    if (!equals(range_sum, id, cfg))
        throw ValidationError("generator image ranges do not sum to 1");
}

// U_rho = sum_i g_i S_i^*. Rejects families that fail the relations.
inline Element associated_unitary(const std::vector<Element>& images,
                                  const ScalarConfig& cfg = ScalarConfig{}) {
    if (images.empty())
        throw ValidationError("empty generator image family");
    const int n = images[0].n();
    require_cuntz_family(n, images, cfg);
    Element u = Element::zero(n);
    for (int i = 0; i < n; ++i)
        u = linear_combine(
            Complex(1.0), u, Complex(1.0),
            multiply(images[i],
                     adjoint(Element::isometry(n, static_cast<Letter>(i)), cfg),
                     cfg),
            cfg);
    return u;
}

// Unital endomorphism in the unitary picture: rho(S_i) = U S_i. Immutable.
class Endomorphism {
  public:
    static Endomorphism from_unitary(const Element& u,
                                     const ScalarConfig& cfg = ScalarConfig{}) {
        if (!is_unitary(u, cfg))
            throw ValidationError("associated element is not unitary");
        Endomorphism rho;
        rho.n_ = u.n();
        rho.unitary_ = u;
        for (int i = 0; i < rho.n_; ++i)
            rho.images_.push_back(multiply(
                u, Element::isometry(rho.n_, static_cast<Letter>(i)), cfg));
        return rho;
    }

    static Endomorphism from_images(std::vector<Element> images,
                                    const ScalarConfig& cfg = ScalarConfig{}) {
        const Element u = associated_unitary(images, cfg);
        Endomorphism rho;
        rho.n_ = u.n();
        rho.unitary_ = u;
        rho.images_ = std::move(images);
        return rho;
    }

    static Endomorphism identity(int n) {
        std::vector<Element> images;
        for (int i = 0; i < n; ++i)
            images.push_back(Element::isometry(n, static_cast<Letter>(i)));
        return from_images(std::move(images));
    }

    int n() const { return n_; }
    const Element& unitary() const { return unitary_; }
    const std::vector<Element>& images() const { return images_; }

  private:
    Endomorphism() : unitary_(Element::zero(2)) {}

    int n_ = 2;
    Element unitary_;
    std::vector<Element> images_;
};

// Multiplicative extension: S_J S_K^* maps to the product of generator
// images of J times the adjoint product for K.
inline Element apply(const Endomorphism& rho, const Element& x,
                     const ScalarConfig& cfg = ScalarConfig{}) {
    if (rho.n() != x.n())
        throw AlphabetMismatch("endomorphism and element alphabets differ");
    const int n = rho.n();
    std::map<Word, Element> cache;
    cache[{}] = Element::one(n);
    std::function<const Element&(const Word&)> image_of =
        [&](const Word& w) -> const Element& {
        auto it = cache.find(w);
        if (it != cache.end()) return it->second;
        Word prefix(w.begin(), w.end() - 1);
        Element img = multiply(image_of(prefix), rho.images()[w.back()], cfg);
        return cache.emplace(w, std::move(img)).first->second;
    };

    std::vector<Term> terms;
    for (const Term& t : x.terms()) {
        const Element product = multiply(
            image_of(t.j), adjoint(image_of(t.k), cfg), cfg);
        for (const Term& p : product.terms())
            terms.push_back(Term{t.coeff * p.coeff, p.j, p.k});
    }
    return Element::from_terms(n, std::move(terms), cfg);
}

inline Endomorphism compose(const Endomorphism& r1, const Endomorphism& r2,
                            const ScalarConfig& cfg = ScalarConfig{}) {
    if (r1.n() != r2.n())
        throw AlphabetMismatch("endomorphism alphabets differ");
    std::vector<Element> images;
    for (const Element& g : r2.images()) images.push_back(apply(r1, g, cfg));
    return Endomorphism::from_images(std::move(images), cfg);
}

inline Endomorphism power(const Endomorphism& rho, unsigned k,
                          const ScalarConfig& cfg = ScalarConfig{}) {
    if (k == 0) throw ValidationError("power wants a positive exponent");
    Endomorphism result = rho;
    for (unsigned i = 1; i < k; ++i) result = compose(rho, result, cfg);
    return result;
}

// S_j maps to sum_i m(i,j) S_i.
inline Endomorphism bogolyubov(const ComplexMatrix& m,
                               const ScalarConfig& cfg = ScalarConfig{}) {
    if (m.rows() != m.cols() || !matrix_is_unitary(m, cfg))
        throw ValidationError("coefficient matrix is not unitary");
    const int n = static_cast<int>(m.rows());
    std::vector<Element> images;
    for (int j = 0; j < n; ++j) {
        std::vector<Term> terms;
        for (int i = 0; i < n; ++i)
            terms.push_back(Term{m(i, j), Word{static_cast<Letter>(i)}, {}});
        images.push_back(Element::from_terms(n, std::move(terms), cfg));
    }
    return Endomorphism::from_images(std::move(images), cfg);
}

// Bijection on the N^k words of length k, stored as an index table.
struct PermutationSpec {
    int k = 1;
    std::vector<std::uint64_t> sigma;

    void validate(int n) const {
        if (k < 1) throw ValidationError("block length must be positive");
        const std::uint64_t count = ipow(n, static_cast<unsigned>(k));
        if (sigma.size() != count)
            throw ValidationError("permutation table has the wrong size");
        std::vector<bool> hit(count, false);
        for (std::uint64_t v : sigma) {
            if (v >= count || hit[v])
                throw ValidationError("permutation table is not a bijection");
            hit[v] = true;
        }
    }
};

// U = sum over length-k words J of S_{sigma(J)} S_J^*.
inline Endomorphism permutation_endomorphism(
    int n, const PermutationSpec& spec,
    const ScalarConfig& cfg = ScalarConfig{}) {
    spec.validate(n);
    std::vector<Term> terms;
    const std::size_t len = static_cast<std::size_t>(spec.k);
    for (std::uint64_t j = 0; j < spec.sigma.size(); ++j)
        terms.push_back(Term{Complex(1.0), word_at(spec.sigma[j], len, n),
                             word_at(j, len, n)});
    return Endomorphism::from_unitary(
        Element::from_terms(n, std::move(terms), cfg), cfg);
}

// x -> sum_i S_i x S_i^*, the endomorphism of the flip unitary.
inline Endomorphism canonical_shift(int n) {
    return Endomorphism::from_unitary(flip_unitary(n));
}

// E(x) = rho(S_e^* rho(x) S_e). Idempotent whenever S_e^* rho(rho(y)) S_e
// recovers y, which the diagonal form of rho^2 guarantees for the
// endomorphisms this projects for.
inline Element conditional_expectation_rho(
    const Endomorphism& rho, Letter e, const Element& x,
    const ScalarConfig& cfg = ScalarConfig{}) {
    if (rho.n() != x.n())
        throw AlphabetMismatch("endomorphism and element alphabets differ");
    if (e >= rho.n())
        throw ValidationError("neutral letter outside alphabet");
    const Element se = Element::isometry(rho.n(), e);
    const Element inner = multiply(
        multiply(adjoint(se, cfg), apply(rho, x, cfg), cfg), se, cfg);
    return apply(rho, inner, cfg);
}

// gamma(gamma(S_i)) = sum_j S_j gamma(S_i) S_j^* for every generator.
inline bool check_square_root_relation(const Endomorphism& gamma,
                                       const ScalarConfig& cfg = ScalarConfig{}) {
    const Endomorphism shift = canonical_shift(gamma.n());
    for (const Element& g : gamma.images()) {
        if (!equals(apply(gamma, g, cfg), apply(shift, g, cfg), cfg))
            return false;
    }
    return true;
}

inline bool check_phi_invariance(const Endomorphism& rho,
                                 const std::vector<Element>& samples,
                                 const ScalarConfig& cfg = ScalarConfig{}) {
    for (const Element& x : samples) {
        if (std::abs(phi(apply(rho, x, cfg)) - phi(x)) > cfg.equality_tol)
            return false;
    }
    return true;
}

}  // namespace cuntz

#endif  // CUNTZ_ENDOMORPHISM_HPP
