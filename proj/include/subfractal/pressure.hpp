#ifndef SUBFRACTAL_PRESSURE_HPP
#define SUBFRACTAL_PRESSURE_HPP

#include <optional>
#include <string>
#include <vector>

#include "subfractal/contraction.hpp"
#include "subfractal/sofic.hpp"
#include "subfractal/spectral.hpp"
#include "subfractal/symbolic.hpp"

namespace subfractal {

/// Which contraction bound a computation weights words with.
enum class BoundSide { lower, upper };

/// Diagonal weight matrices attached to a word-transition matrix at
/// exponent t: `s_diag[j]` is c(last letter of column label j)^t and
/// `s0_diag[i]` is (product of c over row label i)^t.
struct WeightMatrices {
    std::vector<double> s_diag;
    std::vector<double> s0_diag;
    double t = 0.0;
    BoundSide side = BoundSide::lower;
};

WeightMatrices build_weight_matrices(const TransitionMatrix& tm, const ContractionSystem& c,
                                     double t, BoundSide side);

/// Exact weighted word sum sum_{w in W_n} c_w^t for an SFT, computed by
/// pushing the weight diagonals through powers of the transition matrix
/// restricted to windows that admit infinite continuations. Needs
/// n >= k where k is the forbidden-word length.
double word_sum_via_transfer(const TransitionMatrix& tm, const ContractionSystem& c, double t,
                             BoundSide side, int n);

/// t -> topological pressure of the weighted subshift. Spectral mode
/// evaluates log of the spectral radius of the weighted adjacency;
/// truncated mode evaluates (1/n) log of the length-n weighted word sum.
class PressureEvaluator {
public:
    PressureEvaluator(const Presentation& p, const ContractionSystem& c, BoundSide side,
                      std::optional<int> truncation = std::nullopt,
                      double eig_tol = default_eig_tol);

    double operator()(double t) const;

    BoundSide side() const { return side_; }
    /// Largest contraction constant on the chosen side; the pressure
    /// decreases at least as fast as t * log of this.
    double max_constant() const { return max_constant_; }

private:
    ContractionSystem contraction_;
    BoundSide side_;
    std::optional<int> truncation_;
    double eig_tol_;
    double max_constant_;

    LabeledGraph live_graph_;              // spectral mode, both input kinds
    std::optional<TransitionMatrix> sft_;  // truncated mode, forbidden-word input
    std::vector<double> word_products_;    // truncated mode, graph input
};

double pressure(const Presentation& p, const ContractionSystem& c, double t, BoundSide side,
                std::optional<int> truncation = std::nullopt);

inline constexpr double default_root_tol = 1e-10;
inline constexpr int default_root_max_iter = 200;

/// Unique zero of a pressure function, found by bisection on [0, t_hi]
/// with t_hi derived from the pressure at 0 and the slowest decay rate.
/// Converged when the bracket width and |pressure| both fall below
/// root_tol. Throws EmptyLanguageError if the pressure at 0 is negative.
double find_pressure_zero(const PressureEvaluator& p, double root_tol = default_root_tol,
                          int max_iter = default_root_max_iter);

enum class DimensionKind { hausdorff, packing, lower_box, upper_box };

std::string dimension_kind_name(DimensionKind k);

/// Dimension bracket contributed by one strongly connected component.
struct ComponentBound {
    int id = 0; // position in the report's component list
    std::vector<int> vertices; // indices into the live graph's vertex set
    std::vector<std::string> vertex_names;
    double h = 0.0;
    double H = 0.0;
    bool degenerate = false; // single periodic orbit, dimension bound 0
};

/// A cross-component edge of a reducible presentation. Such edges extend
/// the language with transient prefixes but never move the pressure
/// zeros, so they are listed for transparency and excluded from the
/// weighted blocks.
struct TransitionalEdge {
    std::string from;
    std::string to;
};

/// Rigorous dimension bracket [h, H] for the subfractal induced by the
/// subshift, plus the per-component breakdown when the weighted
/// adjacency is reducible.
struct DimensionReport {
    double h = 0.0;
    double H = 0.0;
    bool irreducible = false;
    /// False when the presentation is not right-resolving: word sums may
    /// then be overcounted and only H is a certified bound.
    bool lower_certified = true;
    std::vector<DimensionKind> applies_to;
    std::vector<ComponentBound> components;
    std::vector<TransitionalEdge> transitional;
    std::vector<std::string> notes;
};

struct BoundsOptions {
    double root_tol = default_root_tol;
    double eig_tol = default_eig_tol;
    /// Worker threads for per-component work; 0 picks the hardware
    /// concurrency, also overridable via SUBSHIFTDIM_THREADS.
    int threads = 0;
};

DimensionReport dimension_bounds(const Presentation& p, const ContractionSystem& c,
                                 const BoundsOptions& options = {});

/// Measure nu_n of the cylinder [[w]]: the weighted share of length
/// (n + len(w)) words that start with w, at exponent h.
double cylinder_measure(const Presentation& p, const ContractionSystem& c, const Word& w, int n,
                        double h, BoundSide side, std::size_t cap = default_word_cap);

/// One row of the boundedness table: weighted word sums at the computed
/// dimension bounds, which stay bounded in n when the bounds are tight.
struct BoundednessRow {
    int n = 0;
    double lower_sum = 0.0; // sum c_w^h over W_n
    double upper_sum = 0.0; // sum c̄_w^H over W_n
};

/// Throws NotApplicableError when the weighted adjacency is reducible
/// (the bounded-sum characterization needs irreducibility).
std::vector<BoundednessRow> boundedness_diagnostics(const Presentation& p,
                                                    const ContractionSystem& c, double h, double H,
                                                    const std::vector<int>& lengths,
                                                    std::size_t cap = default_word_cap);

} // namespace subfractal

#endif
