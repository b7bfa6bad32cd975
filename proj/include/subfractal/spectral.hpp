#ifndef SUBFRACTAL_SPECTRAL_HPP
#define SUBFRACTAL_SPECTRAL_HPP

#include <cstddef>
#include <vector>

#include "subfractal/matrix.hpp"

namespace subfractal {

/// A nonzero entry connecting two distinct strongly connected components.
struct TransitionalEntry {
    int from = 0;
    int to = 0;
    double value = 0.0;
};

/// Strongly-connected-component decomposition of a square nonnegative
/// matrix viewed as a digraph (edge i -> j iff entry (i,j) != 0).
///
/// Components are listed so that every cross-component edge points from a
/// later-listed component to an earlier-listed one; permuting the matrix
/// by `permutation` therefore makes it block lower-triangular with the
/// diagonal blocks in list order.
struct SccDecomposition {
    std::vector<std::vector<int>> components; // original vertex indices, each sorted
    std::vector<int> permutation;             // components concatenated in list order
    std::vector<Matrix> component_matrices;   // diagonal blocks
    std::vector<TransitionalEntry> transitional_entries;

    std::size_t component_count() const { return components.size(); }
};

SccDecomposition scc_decompose(const Matrix& m);

/// True iff the digraph of `m` is a single strongly connected component
/// with at least one edge (so a 1x1 zero matrix is reducible).
bool is_irreducible(const Matrix& m);

struct SpectralResult {
    double radius = 0.0;
    int iterations = 0;
    /// Perron vector, normalized to unit 1-norm; empty when the input is
    /// reducible (only the radius is reported then).
    std::vector<double> right_eigenvector;
    bool irreducible = false;
};

inline constexpr double default_eig_tol = 1e-12;
inline constexpr int default_eig_max_iter = 100000;

/// Spectral radius of a square nonnegative matrix. Reducible input is
/// split into strongly connected components and the radius is the max
/// over the diagonal blocks. Throws NumericError (carrying the best
/// estimate) if the iteration fails to converge.
SpectralResult spectral_radius(const Matrix& m, double tol = default_eig_tol,
                               int max_iter = default_eig_max_iter);

} // namespace subfractal

#endif
