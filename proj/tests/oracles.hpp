#ifndef SUBFRACTAL_TEST_ORACLES_HPP
#define SUBFRACTAL_TEST_ORACLES_HPP

#include <vector>

#include "subfractal/contraction.hpp"
#include "subfractal/matrix.hpp"
#include "subfractal/sofic.hpp"
#include "subfractal/symbolic.hpp"

// Independent reference implementations used to cross-check the library.
// Everything here favors exhaustive search and small-degree algebra over
// the matrix machinery under test.
namespace oracle {

// Length-n words of the one-sided subshift, by checking every candidate
// word against the forbidden list and demanding an admissible infinite
// continuation (liveness of suffix windows is computed by fixed-point
// iteration on raw words, not via the transition matrix).
std::vector<subfractal::Word> sft_words(const subfractal::ForbiddenSet& f,
                                        const subfractal::Alphabet& a, int n);

// Sum of c_w^t over sft_words, accumulated in extended precision.
double sft_word_sum(const subfractal::ForbiddenSet& f, const subfractal::Alphabet& a,
                    const subfractal::ContractionSystem& c, double t, bool upper, int n);

// Distinct label words of n-edge paths that can be extended forever,
// by exhaustive depth-first path search.
std::vector<subfractal::Word> graph_words(const subfractal::LabeledGraph& g, int n);

// Number of n-edge paths (not distinct words) over the forever-extendable
// part of the graph.
long long graph_path_count(const subfractal::LabeledGraph& g, int n);

// Spectral radius via the characteristic polynomial: Faddeev-LeVerrier
// coefficients, then the largest real root in [0, 1 + max row sum]
// located by sign scanning and bisection; repeated roots are picked up
// through derivative polynomials. Intended for matrices up to 4x4.
double char_poly_radius(const subfractal::Matrix& m);

} // namespace oracle

#endif
