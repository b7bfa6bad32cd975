#ifndef SUBFRACTAL_SYMBOLIC_HPP
#define SUBFRACTAL_SYMBOLIC_HPP

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "subfractal/matrix.hpp"

namespace subfractal {

/// Finite alphabet {1, ..., m}. Letters are dense 1-based indices;
/// display names, when any, live in the I/O layer.
struct Alphabet {
    int size = 0;

    explicit Alphabet(int m);
    bool contains(int letter) const { return letter >= 1 && letter <= size; }
};

/// A finite word over an alphabet, stored as 1-based letter indices.
/// The empty word is representable; operations that forbid it say so.
class Word {
public:
    Word() = default;
    explicit Word(std::vector<int> letters) : letters_(std::move(letters)) {}
    Word(std::initializer_list<int> letters) : letters_(letters) {}

    int length() const { return static_cast<int>(letters_.size()); }
    bool empty() const { return letters_.empty(); }
    int operator[](int i) const { return letters_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& letters() const { return letters_; }

    /// First n letters.
    Word prefix(int n) const;
    /// Last n letters.
    Word suffix(int n) const;
    /// Word with the final letter removed.
    Word drop_last() const;
    Word append(int letter) const;
    Word concat(const Word& tail) const;
    bool starts_with(const Word& p) const;
    /// True if w occurs as a factor (contiguous subword).
    bool contains_factor(const Word& w) const;

    bool valid_over(const Alphabet& a) const;

    /// Compact display form, e.g. "121". Letters above 9 are separated
    /// by dots.
    std::string str() const;

    auto operator<=>(const Word&) const = default;

private:
    std::vector<int> letters_;
};

/// All words of a fixed length in lexicographic order (1 < 2 < ... < m).
std::vector<Word> all_words(const Alphabet& alphabet, int length);

/// Position of `w` in all_words(alphabet, w.length()).
std::size_t lex_index(const Word& w, const Alphabet& alphabet);

/// A finite forbidden-word list, normalized to uniform length k >= 2.
class ForbiddenSet {
public:
    /// Words must already share a single length k >= 2; see
    /// normalize_forbidden_set for arbitrary input.
    ForbiddenSet(std::vector<Word> words, const Alphabet& alphabet);

    static ForbiddenSet empty_set() { return ForbiddenSet(); }

    int uniform_length() const { return k_; }
    const std::vector<Word>& words() const { return words_; }
    bool contains(const Word& w) const;
    bool is_empty() const { return words_.empty(); }

private:
    ForbiddenSet() : k_(2) {}

    std::vector<Word> words_; // sorted, deduplicated
    int k_;
};

/// The N x N word-transition matrix of an SFT, N = m^(k-1), with rows and
/// columns labeled by all of Omega_{k-1} in lexicographic order.
struct TransitionMatrix {
    Matrix entries;
    std::vector<Word> labels; // row labels == column labels

    int size() const { return static_cast<int>(labels.size()); }
    /// Length of the row labels (k-1); label words have this length.
    int label_length() const { return labels.empty() ? 0 : labels.front().length(); }
    /// Forbidden-word length k this matrix was built for.
    int word_length() const { return label_length() + 1; }
};

/// A set of equal-length words.
struct WordSet {
    std::vector<Word> words; // sorted, deduplicated
    int length = 0;

    std::size_t count() const { return words.size(); }
    bool contains(const Word& w) const;
};

inline constexpr std::size_t default_word_cap = 10'000'000;

/// Rewrite an arbitrary finite forbidden list as an equivalent uniform-
/// length list: k = max input length (at least 2), shorter words replaced
/// by all their right-extensions to length k. The one-sided sequences
/// avoiding the output are exactly those avoiding the input.
ForbiddenSet normalize_forbidden_set(const std::vector<Word>& raw, const Alphabet& alphabet);

/// True iff the (k-2)-suffix of `a` equals the (k-2)-prefix of `b`.
/// Vacuously true for length-1 words.
bool is_compatible(const Word& a, const Word& b);

/// The length-k word a_1 b_1 ... b_{k-1} glued from a compatible pair.
Word star(const Word& a, const Word& b);

/// Word-transition matrix of the SFT: entry (i,j) = 1 iff label i is
/// compatible with label j and their glued word is not forbidden.
TransitionMatrix build_transition_matrix(const ForbiddenSet& forbidden, const Alphabet& alphabet);

/// All length-n words of the SFT's language (factors of some infinite
/// admissible sequence; windows that cannot be continued forever are
/// pruned). Throws ResourceError past `cap` words.
WordSet enumerate_sft_words(const ForbiddenSet& forbidden, const Alphabet& alphabet, int n,
                            std::size_t cap = default_word_cap);

/// Vertices of the transition matrix (or any 0/1 adjacency structure)
/// from which an infinite path exists, i.e. vertices that reach a cycle.
std::vector<bool> live_vertices(const Matrix& adjacency);

} // namespace subfractal

#endif
