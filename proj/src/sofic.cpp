#include "subfractal/sofic.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "subfractal/errors.hpp"

namespace subfractal {

std::vector<std::vector<int>> LabeledGraph::out_edge_lists() const {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(vertex_count));
    for (std::size_t e = 0; e < edges.size(); ++e)
        out[static_cast<std::size_t>(edges[e].from)].push_back(static_cast<int>(e));
    return out;
}

Matrix LabeledGraph::adjacency() const {
    Matrix a(static_cast<std::size_t>(vertex_count), static_cast<std::size_t>(vertex_count));
    for (const LabeledEdge& e : edges)
        a(e.from, e.to) = 1.0;
    return a;
}

std::string LabeledGraph::vertex_name(int v) const {
    if (static_cast<std::size_t>(v) < vertex_names.size() && !vertex_names[static_cast<std::size_t>(v)].empty())
        return vertex_names[static_cast<std::size_t>(v)];
    return "v" + std::to_string(v + 1);
}

RightResolvingReport validate_right_resolving(const LabeledGraph& g) {
    if (g.vertex_count < 1)
        throw InputError("labeled graph needs at least one vertex");
    if (g.alphabet_size < 1)
        throw InputError("labeled graph needs a nonempty alphabet");
    RightResolvingReport report;
    std::set<std::pair<int, int>> seen;
    for (const LabeledEdge& e : g.edges) {
        if (e.from < 0 || e.from >= g.vertex_count || e.to < 0 || e.to >= g.vertex_count)
            throw InputError("edge endpoint out of range: " + std::to_string(e.from) + " -> " +
                             std::to_string(e.to));
        if (e.label < 1 || e.label > g.alphabet_size)
            throw InputError("edge label " + std::to_string(e.label) + " outside alphabet of size " +
                             std::to_string(g.alphabet_size));
        if (!seen.insert({e.from, e.label}).second) {
            report.ok = false;
            report.violations.push_back("vertex " + g.vertex_name(e.from) +
                                        " has two out-edges labeled " + std::to_string(e.label));
        }
    }
    return report;
}

WeightedAdjacency weighted_adjacency(const LabeledGraph& g, const ContractionSystem& c, double t,
                                     bool upper) {
    if (c.alphabet_size() != g.alphabet_size)
        throw InputError("contraction bounds cover " + std::to_string(c.alphabet_size()) +
                         " letters but the graph alphabet has " + std::to_string(g.alphabet_size));
    if (!std::isfinite(t))
        throw InputError("weight exponent must be finite");

    WeightedAdjacency w;
    w.t = t;
    w.upper = upper;
    w.entries = Matrix(static_cast<std::size_t>(g.vertex_count),
                       static_cast<std::size_t>(g.vertex_count));
    for (const LabeledEdge& e : g.edges) {
        double base = upper ? c.upper(e.label) : c.lower(e.label);
        w.entries(e.from, e.to) += std::pow(base, t);
    }
    return w;
}

LabeledGraph sft_as_labeled_graph(const TransitionMatrix& t) {
    LabeledGraph g;
    g.vertex_count = t.size();
    g.alphabet_size = 0;
    int p = t.label_length();
    for (const Word& label : t.labels) {
        g.vertex_names.push_back(label.str());
        for (int i = 0; i < label.length(); ++i)
            g.alphabet_size = std::max(g.alphabet_size, label[i]);
    }
    for (int i = 0; i < t.size(); ++i)
        for (int j = 0; j < t.size(); ++j)
            if (t.entries(i, j) != 0.0)
                g.edges.push_back({i, j, t.labels[static_cast<std::size_t>(j)][p - 1]});
    return g;
}

namespace {

std::vector<int> live_graph_vertices(const LabeledGraph& g) {
    std::vector<bool> live = live_vertices(g.adjacency());
    std::vector<int> out;
    for (int v = 0; v < g.vertex_count; ++v)
        if (live[static_cast<std::size_t>(v)])
            out.push_back(v);
    return out;
}

} // namespace

LabeledGraph live_restriction(const LabeledGraph& g) {
    std::vector<bool> live = live_vertices(g.adjacency());
    std::vector<int> new_index(static_cast<std::size_t>(g.vertex_count), -1);
    LabeledGraph out;
    out.alphabet_size = g.alphabet_size;
    for (int v = 0; v < g.vertex_count; ++v) {
        if (live[static_cast<std::size_t>(v)]) {
            new_index[static_cast<std::size_t>(v)] = out.vertex_count++;
            out.vertex_names.push_back(g.vertex_name(v));
        }
    }
    for (const LabeledEdge& e : g.edges) {
        int f = new_index[static_cast<std::size_t>(e.from)];
        int t = new_index[static_cast<std::size_t>(e.to)];
        if (f >= 0 && t >= 0)
            out.edges.push_back({f, t, e.label});
    }
    return out;
}

WordSet enumerate_graph_words(const LabeledGraph& g, int n, std::size_t cap) {
    if (n < 0)
        throw InputError("word length must be nonnegative");

    std::vector<bool> live = live_vertices(g.adjacency());
    auto out_lists = g.out_edge_lists();

    WordSet result;
    result.length = n;
    std::set<Word> seen;

    if (n == 0) {
        if (std::find(live.begin(), live.end(), true) != live.end())
            result.words.push_back(Word{});
        return result;
    }

    struct Frame {
        int vertex;
        std::size_t next;
    };
    std::vector<Frame> stack;
    std::vector<int> letters;
    for (int start = 0; start < g.vertex_count; ++start) {
        if (!live[static_cast<std::size_t>(start)])
            continue;
        letters.clear();
        stack.assign(1, {start, 0});
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (static_cast<int>(letters.size()) == n) {
                if (seen.emplace(letters).second && seen.size() > cap)
                    throw ResourceError("word enumeration exceeded cap of " + std::to_string(cap));
                letters.pop_back();
                stack.pop_back();
                continue;
            }
            const auto& out = out_lists[static_cast<std::size_t>(f.vertex)];
            bool descended = false;
            while (f.next < out.size()) {
                const LabeledEdge& e = g.edges[static_cast<std::size_t>(out[f.next++])];
                if (!live[static_cast<std::size_t>(e.to)])
                    continue;
                letters.push_back(e.label);
                stack.push_back({e.to, 0});
                descended = true;
                break;
            }
            if (!descended) {
                if (!letters.empty() && stack.size() > 1)
                    letters.pop_back();
                stack.pop_back();
            }
        }
    }
    result.words.assign(seen.begin(), seen.end());
    return result;
}

WordSumSandwich word_sum_sandwich(const LabeledGraph& g, const ContractionSystem& c, double t,
                                  int n, bool upper, std::size_t cap) {
    if (n < 1)
        throw InputError("sandwich bounds need word length at least 1");

    WordSumSandwich s;
    std::vector<int> live = live_graph_vertices(g);
    if (live.empty())
        return s;

    Matrix a = weighted_adjacency(g, c, t, upper).entries.submatrix(live);
    std::vector<double> v(live.size(), 1.0);
    for (int step = 0; step < n; ++step)
        v = a * v;
    for (double x : v)
        s.matrix_sum += x;

    for (const Word& w : enumerate_graph_words(g, n, cap).words)
        s.word_sum += std::pow(upper ? c.upper_product(w) : c.lower_product(w), t);

    s.lower_bound = s.matrix_sum / static_cast<double>(live.size());
    return s;
}

Presentation::Presentation(Alphabet alphabet, ForbiddenSet forbidden)
    : alphabet_(alphabet), forbidden_(std::move(forbidden)) {
    for (const Word& w : forbidden_->words())
        if (!w.valid_over(alphabet_))
            throw InputError("forbidden word " + w.str() + " uses letters outside the alphabet");
}

Presentation::Presentation(Alphabet alphabet, LabeledGraph graph) : alphabet_(alphabet) {
    if (graph.alphabet_size != alphabet.size)
        throw InputError("graph alphabet size " + std::to_string(graph.alphabet_size) +
                         " does not match declared alphabet size " + std::to_string(alphabet.size));
    RightResolvingReport report = validate_right_resolving(graph);
    right_resolving_ = report.ok;
    for (const std::string& v : report.violations)
        warnings_.push_back("not right-resolving: " + v +
                            "; matrix word sums may overcount, so only the upper dimension"
                            " bound is certified");
    graph_ = std::move(graph);
}

const ForbiddenSet& Presentation::forbidden() const {
    if (!forbidden_)
        throw InputError("presentation is a labeled graph, not a forbidden-word list");
    return *forbidden_;
}

const TransitionMatrix& Presentation::transition_matrix() const {
    if (!forbidden_)
        throw InputError("word-transition matrices are defined for forbidden-word input only");
    if (!transition_)
        transition_ = build_transition_matrix(*forbidden_, alphabet_);
    return *transition_;
}

const LabeledGraph& Presentation::graph() const {
    if (!graph_)
        graph_ = sft_as_labeled_graph(transition_matrix());
    return *graph_;
}

WordSet Presentation::enumerate_allowed_words(int n, std::size_t cap) const {
    if (forbidden_)
        return enumerate_sft_words(*forbidden_, alphabet_, n, cap);
    return enumerate_graph_words(*graph_, n, cap);
}

} // namespace subfractal
