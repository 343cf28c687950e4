#ifndef CUNTZ_CORE_HPP
#define CUNTZ_CORE_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cuntz {

using Complex = std::complex<double>;

// A letter of the generator alphabet {0, ..., N-1}.
using Letter = std::uint8_t;

// A multi-index: finite word over the alphabet. The empty word denotes the
// scalar side (no isometry).
using Word = std::vector<Letter>;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operands built over different alphabet sizes.
struct AlphabetMismatch : Error {
    using Error::Error;
};

// Input fails a structural precondition (non-unitary, bad bracket, ...).
struct ValidationError : Error {
    using Error::Error;
};

// Element cannot be represented at the requested matrix level.
struct RepresentationError : Error {
    using Error::Error;
};

// Local-rule extraction failed (partition violated, no admissible lookahead).
struct ExtractionError : Error {
    using Error::Error;
};

// A rule's tables do not reach deep enough for the requested computation.
struct DepthError : Error {
    using Error::Error;
};

// Enumeration would exceed the configured word budget.
struct BudgetError : Error {
    using Error::Error;
};

// Tolerances for scalar comparisons. zero_tol drives coefficient pruning
// during canonicalization, equality_tol drives element/matrix comparisons.
struct ScalarConfig {
    double zero_tol = 1e-9;
    double equality_tol = 1e-9;

    static ScalarConfig checked(double zero_tol, double equality_tol) {
        if (!(zero_tol > 0.0) || !(zero_tol < 1e-3) || !(equality_tol > 0.0) ||
            !(equality_tol < 1e-3)) {
            throw ValidationError(
                "scalar tolerances must be positive and below 1e-3");
        }
        return ScalarConfig{zero_tol, equality_tol};
    }
};

inline std::uint64_t ipow(std::uint64_t base, unsigned exp) {
    std::uint64_t v = 1;
    for (unsigned i = 0; i < exp; ++i) {
        if (base != 0 && v > UINT64_MAX / base)
            throw BudgetError("word count overflows 64 bits");
        v *= base;
    }
    return v;
}

inline bool word_valid(const Word& w, int alphabet) {
    for (Letter a : w)
        if (a >= alphabet) return false;
    return true;
}

// Lexicographic index with the leftmost letter most significant.
inline std::uint64_t word_index(const Word& w, int alphabet) {
    std::uint64_t idx = 0;
    for (Letter a : w) idx = idx * static_cast<std::uint64_t>(alphabet) + a;
    return idx;
}

inline Word word_at(std::uint64_t index, std::size_t length, int alphabet) {
    Word w(length, 0);
    for (std::size_t i = length; i-- > 0;) {
        w[i] = static_cast<Letter>(index % alphabet);
        index /= alphabet;
    }
    return w;
}

inline std::vector<Word> all_words(int alphabet, std::size_t length) {
    const std::uint64_t count = ipow(alphabet, static_cast<unsigned>(length));
    std::vector<Word> out;
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i)
        out.push_back(word_at(i, length, alphabet));
    return out;
}

inline Word concat(const Word& a, const Word& b) {
    Word w = a;
    w.insert(w.end(), b.begin(), b.end());
    return w;
}

inline bool is_prefix(const Word& p, const Word& w) {
    if (p.size() > w.size()) return false;
    return std::equal(p.begin(), p.end(), w.begin());
}

inline std::string word_to_string(const Word& w) {
    std::string s;
    bool wide = false;
    for (Letter a : w)
        if (a > 9) wide = true;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (wide && i) s += '.';
        s += std::to_string(static_cast<int>(w[i]));
    }
    return s;
}

}  // namespace cuntz

#endif  // CUNTZ_CORE_HPP
