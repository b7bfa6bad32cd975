#ifndef SUBFRACTAL_SOFIC_HPP
#define SUBFRACTAL_SOFIC_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "subfractal/contraction.hpp"
#include "subfractal/matrix.hpp"
#include "subfractal/symbolic.hpp"

namespace subfractal {

struct LabeledEdge {
    int from = 0;
    int to = 0;
    int label = 0; // letter in 1..m
};

/// A finite directed multigraph with edges labeled by alphabet letters.
/// The shift it presents is the set of label sequences of infinite paths.
struct LabeledGraph {
    int vertex_count = 0;
    int alphabet_size = 0;
    std::vector<LabeledEdge> edges;
    std::vector<std::string> vertex_names; // optional, for diagnostics

    std::vector<std::vector<int>> out_edge_lists() const; // edge indices per vertex
    /// 0/1 reachability matrix: entry (i,j) = 1 iff some edge i -> j.
    Matrix adjacency() const;
    std::string vertex_name(int v) const;
};

/// Outcome of the right-resolving check: ok, or one message per vertex
/// that has two out-edges sharing a label.
struct RightResolvingReport {
    bool ok = true;
    std::vector<std::string> violations;
};

/// Checks the right-resolving property. Violations are reported, not
/// thrown; only a malformed graph (bad endpoints, labels outside the
/// alphabet, no vertices) raises InputError.
RightResolvingReport validate_right_resolving(const LabeledGraph& g);

/// The vertex-by-vertex matrix whose (i,j) entry sums c(label)^t over
/// edges i -> j, with c the lower or upper contraction bound.
struct WeightedAdjacency {
    Matrix entries;
    double t = 0.0;
    bool upper = false;
};

WeightedAdjacency weighted_adjacency(const LabeledGraph& g, const ContractionSystem& c, double t,
                                     bool upper);

/// Standard presentation of an SFT from its word-transition matrix: one
/// vertex per window label, and an edge i -> j labeled with the last
/// letter of label j whenever the transition (i,j) is allowed. The result
/// is always right-resolving.
LabeledGraph sft_as_labeled_graph(const TransitionMatrix& t);

/// All length-n words presented by the graph (label words of n-edge paths
/// that can be extended forever). Throws ResourceError past `cap` words.
WordSet enumerate_graph_words(const LabeledGraph& g, int n, std::size_t cap = default_word_cap);

/// Subgraph on the vertices that admit infinite continuations, with
/// vertices reindexed densely. The result presents the same language and
/// every remaining vertex has an out-edge (unless the result is empty).
LabeledGraph live_restriction(const LabeledGraph& g);

/// Two-sided bracket for the weighted word sum over W_n: with A the
/// weighted adjacency restricted to vertices that admit infinite
/// continuations and V their number,
///   (1/V) sum[A^n] <= sum_{w in W_n} c_w^t <= sum[A^n].
/// `word_sum` is the exact middle term, computed by enumeration.
struct WordSumSandwich {
    double lower_bound = 0.0;
    double word_sum = 0.0;
    double matrix_sum = 0.0;
};

WordSumSandwich word_sum_sandwich(const LabeledGraph& g, const ContractionSystem& c, double t,
                                  int n, bool upper, std::size_t cap = default_word_cap);

/// A subshift given either by a forbidden-word list (SFT) or by a labeled
/// graph (sofic). Graphs need not be right-resolving, but then matrix
/// word sums may overcount and only upper dimension bounds are certified;
/// the violations are kept as warnings.
class Presentation {
public:
    Presentation(Alphabet alphabet, ForbiddenSet forbidden);
    Presentation(Alphabet alphabet, LabeledGraph graph);

    const Alphabet& alphabet() const { return alphabet_; }
    bool is_sft() const { return forbidden_.has_value(); }
    bool right_resolving() const { return right_resolving_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    const ForbiddenSet& forbidden() const;
    /// The defining graph for sofic input, or the converted standard
    /// presentation for SFT input (built once, cached).
    const LabeledGraph& graph() const;
    /// For SFT input, the word-transition matrix (built once, cached).
    const TransitionMatrix& transition_matrix() const;

    WordSet enumerate_allowed_words(int n, std::size_t cap = default_word_cap) const;

private:
    Alphabet alphabet_;
    std::optional<ForbiddenSet> forbidden_;
    bool right_resolving_ = true;
    std::vector<std::string> warnings_;
    mutable std::optional<TransitionMatrix> transition_;
    mutable std::optional<LabeledGraph> graph_;
};

} // namespace subfractal

#endif
