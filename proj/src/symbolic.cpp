#include "subfractal/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

#include "subfractal/errors.hpp"

namespace subfractal {

Alphabet::Alphabet(int m) : size(m) {
    if (m < 1)
        throw InputError("alphabet needs at least one letter, got m=" + std::to_string(m));
}

Word Word::prefix(int n) const {
    return Word(std::vector<int>(letters_.begin(), letters_.begin() + n));
}

Word Word::suffix(int n) const {
    return Word(std::vector<int>(letters_.end() - n, letters_.end()));
}

Word Word::drop_last() const {
    return prefix(length() - 1);
}

Word Word::append(int letter) const {
    std::vector<int> out = letters_;
    out.push_back(letter);
    return Word(std::move(out));
}

Word Word::concat(const Word& tail) const {
    std::vector<int> out = letters_;
    out.insert(out.end(), tail.letters_.begin(), tail.letters_.end());
    return Word(std::move(out));
}

bool Word::starts_with(const Word& p) const {
    if (p.length() > length())
        return false;
    return std::equal(p.letters_.begin(), p.letters_.end(), letters_.begin());
}

bool Word::contains_factor(const Word& w) const {
    if (w.empty())
        return true;
    if (w.length() > length())
        return false;
    auto it = std::search(letters_.begin(), letters_.end(), w.letters_.begin(), w.letters_.end());
    return it != letters_.end();
}

bool Word::valid_over(const Alphabet& a) const {
    return std::all_of(letters_.begin(), letters_.end(),
                       [&](int l) { return a.contains(l); });
}

std::string Word::str() const {
    std::string out;
    bool wide = std::any_of(letters_.begin(), letters_.end(), [](int l) { return l > 9; });
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        if (wide && i > 0)
            out += '.';
        out += std::to_string(letters_[i]);
    }
    return out;
}

std::vector<Word> all_words(const Alphabet& alphabet, int length) {
    if (length < 0)
        throw InputError("word length must be nonnegative");
    double total = std::pow(static_cast<double>(alphabet.size), length);
    if (total > static_cast<double>(default_word_cap))
        throw ResourceError("word enumeration would exceed cap of " +
                            std::to_string(default_word_cap));

    std::vector<Word> out;
    out.reserve(static_cast<std::size_t>(total));
    std::vector<int> current(static_cast<std::size_t>(length), 1);
    while (true) {
        out.emplace_back(current);
        int pos = length - 1;
        while (pos >= 0 && current[static_cast<std::size_t>(pos)] == alphabet.size) {
            current[static_cast<std::size_t>(pos)] = 1;
            --pos;
        }
        if (pos < 0)
            break;
        ++current[static_cast<std::size_t>(pos)];
    }
    return out;
}

std::size_t lex_index(const Word& w, const Alphabet& alphabet) {
    std::size_t idx = 0;
    for (int i = 0; i < w.length(); ++i)
        idx = idx * static_cast<std::size_t>(alphabet.size) + static_cast<std::size_t>(w[i] - 1);
    return idx;
}

ForbiddenSet::ForbiddenSet(std::vector<Word> words, const Alphabet& alphabet) {
    if (words.empty())
        throw InputError("uniform forbidden set needs at least one word; "
                         "use ForbiddenSet::empty_set() for none");
    k_ = words.front().length();
    if (k_ < 2)
        throw InputError("uniform forbidden-word length must be at least 2, got " +
                         std::to_string(k_));
    for (const Word& w : words) {
        if (w.length() != k_)
            throw InputError("forbidden words must share one length; found " +
                             std::to_string(w.length()) + " and " + std::to_string(k_));
        if (!w.valid_over(alphabet))
            throw InputError("forbidden word " + w.str() + " uses letters outside the alphabet");
    }
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
    words_ = std::move(words);
}

bool ForbiddenSet::contains(const Word& w) const {
    return std::binary_search(words_.begin(), words_.end(), w);
}

bool WordSet::contains(const Word& w) const {
    return std::binary_search(words.begin(), words.end(), w);
}

ForbiddenSet normalize_forbidden_set(const std::vector<Word>& raw, const Alphabet& alphabet) {
    if (raw.empty())
        return ForbiddenSet::empty_set();

    int k = 2;
    for (const Word& w : raw) {
        if (w.empty())
            throw InputError("forbidden words must be nonempty");
        if (!w.valid_over(alphabet))
            throw InputError("forbidden word " + w.str() + " uses letters outside the alphabet");
        k = std::max(k, w.length());
    }

    std::vector<Word> uniform;
    for (const Word& w : raw) {
        int pad = k - w.length();
        double extensions = std::pow(static_cast<double>(alphabet.size), pad);
        if (static_cast<double>(uniform.size()) + extensions > static_cast<double>(default_word_cap))
            throw ResourceError("forbidden-set normalization would exceed cap of " +
                                std::to_string(default_word_cap));
        for (const Word& tail : all_words(alphabet, pad))
            uniform.push_back(w.concat(tail));
    }
    ForbiddenSet result(std::move(uniform), alphabet);
    double full = std::pow(static_cast<double>(alphabet.size), k);
    if (static_cast<double>(result.words().size()) == full)
        throw EmptyLanguageError("every length-" + std::to_string(k) +
                                 " word is forbidden; the subshift is empty");
    return result;
}

bool is_compatible(const Word& a, const Word& b) {
    if (a.length() != b.length() || a.empty())
        throw InputError("compatibility is defined for equal-length nonempty words");
    int overlap = a.length() - 1;
    return a.suffix(overlap) == b.prefix(overlap);
}

Word star(const Word& a, const Word& b) {
    if (!is_compatible(a, b))
        throw InputError("star operation needs a compatible pair");
    return a.prefix(1).concat(b);
}

namespace {

constexpr int max_transition_size = 2048;

} // namespace

TransitionMatrix build_transition_matrix(const ForbiddenSet& forbidden, const Alphabet& alphabet) {
    int p = forbidden.uniform_length() - 1;
    double n_labels = std::pow(static_cast<double>(alphabet.size), p);
    if (n_labels > max_transition_size)
        throw ResourceError("transition matrix would have " + std::to_string(n_labels) +
                            " rows; cap is " + std::to_string(max_transition_size));

    TransitionMatrix t;
    t.labels = all_words(alphabet, p);
    int n = static_cast<int>(t.labels.size());
    t.entries = Matrix(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Word& a = t.labels[static_cast<std::size_t>(i)];
            const Word& b = t.labels[static_cast<std::size_t>(j)];
            if (is_compatible(a, b) && !forbidden.contains(star(a, b)))
                t.entries(i, j) = 1.0;
        }
    }
    return t;
}

std::vector<bool> live_vertices(const Matrix& adjacency) {
    int n = static_cast<int>(adjacency.rows());
    std::vector<std::vector<int>> in_edges(static_cast<std::size_t>(n));
    std::vector<int> live_out_degree(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (adjacency(i, j) != 0.0) {
                in_edges[static_cast<std::size_t>(j)].push_back(i);
                ++live_out_degree[static_cast<std::size_t>(i)];
            }
        }
    }

    std::vector<bool> live(static_cast<std::size_t>(n), true);
    std::queue<int> dying;
    for (int i = 0; i < n; ++i)
        if (live_out_degree[static_cast<std::size_t>(i)] == 0)
            dying.push(i);
    while (!dying.empty()) {
        int v = dying.front();
        dying.pop();
        live[static_cast<std::size_t>(v)] = false;
        for (int u : in_edges[static_cast<std::size_t>(v)]) {
            if (live[static_cast<std::size_t>(u)] &&
                --live_out_degree[static_cast<std::size_t>(u)] == 0)
                dying.push(u);
        }
    }
    return live;
}

WordSet enumerate_sft_words(const ForbiddenSet& forbidden, const Alphabet& alphabet, int n,
                            std::size_t cap) {
    if (n < 0)
        throw InputError("word length must be nonnegative");

    TransitionMatrix t = build_transition_matrix(forbidden, alphabet);
    std::vector<bool> live = live_vertices(t.entries);
    int p = t.label_length();

    WordSet out;
    out.length = n;

    if (n <= p) {
        std::set<Word> seen;
        for (std::size_t i = 0; i < t.labels.size(); ++i)
            if (live[i])
                seen.insert(t.labels[i].prefix(n));
        out.words.assign(seen.begin(), seen.end());
        return out;
    }

    std::vector<std::vector<int>> succ(t.labels.size());
    for (std::size_t i = 0; i < t.labels.size(); ++i)
        for (std::size_t j = 0; j < t.labels.size(); ++j)
            if (t.entries(static_cast<int>(i), static_cast<int>(j)) != 0.0 && live[j])
                succ[i].push_back(static_cast<int>(j));

    // Depth-first over live windows; starting labels and successors are
    // visited in lexicographic order, so the output comes out sorted.
    struct Frame {
        int vertex;
        std::size_t next;
    };
    std::vector<Frame> stack;
    std::vector<int> letters;
    for (std::size_t start = 0; start < t.labels.size(); ++start) {
        if (!live[start])
            continue;
        letters.assign(t.labels[start].letters().begin(), t.labels[start].letters().end());
        stack.assign(1, {static_cast<int>(start), 0});
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (static_cast<int>(letters.size()) == n) {
                if (out.words.size() >= cap)
                    throw ResourceError("word enumeration exceeded cap of " + std::to_string(cap));
                out.words.emplace_back(letters);
                letters.pop_back();
                stack.pop_back();
                continue;
            }
            const auto& next = succ[static_cast<std::size_t>(f.vertex)];
            if (f.next == next.size()) {
                if (stack.size() > 1)
                    letters.pop_back();
                stack.pop_back();
                continue;
            }
            int v = next[f.next++];
            letters.push_back(t.labels[static_cast<std::size_t>(v)][p - 1]);
            stack.push_back({v, 0});
        }
    }
    return out;
}

} // namespace subfractal
