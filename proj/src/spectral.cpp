#include "subfractal/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "subfractal/errors.hpp"

namespace subfractal {

namespace {

std::vector<std::vector<int>> adjacency_lists(const Matrix& m) {
    int n = static_cast<int>(m.rows());
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (m(i, j) != 0.0)
                adj[static_cast<std::size_t>(i)].push_back(j);
    return adj;
}

// Iterative Tarjan. Components are emitted in reverse topological order
// of the condensation, which is exactly the list order documented on
// SccDecomposition.
std::vector<std::vector<int>> tarjan_components(const std::vector<std::vector<int>>& adj) {
    int n = static_cast<int>(adj.size());
    constexpr int unvisited = -1;
    std::vector<int> index(static_cast<std::size_t>(n), unvisited);
    std::vector<int> lowlink(static_cast<std::size_t>(n), 0);
    std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
    std::vector<int> stack;
    std::vector<std::vector<int>> components;
    int next_index = 0;

    struct Frame {
        int v;
        std::size_t edge;
    };
    std::vector<Frame> call;

    for (int root = 0; root < n; ++root) {
        if (index[static_cast<std::size_t>(root)] != unvisited)
            continue;
        call.push_back({root, 0});
        while (!call.empty()) {
            Frame& f = call.back();
            std::size_t v = static_cast<std::size_t>(f.v);
            if (f.edge == 0) {
                index[v] = lowlink[v] = next_index++;
                stack.push_back(f.v);
                on_stack[v] = true;
            }
            bool descended = false;
            while (f.edge < adj[v].size()) {
                int w = adj[v][f.edge++];
                std::size_t wu = static_cast<std::size_t>(w);
                if (index[wu] == unvisited) {
                    call.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[wu])
                    lowlink[v] = std::min(lowlink[v], index[wu]);
            }
            if (descended)
                continue;
            if (lowlink[v] == index[v]) {
                std::vector<int> comp;
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[static_cast<std::size_t>(w)] = false;
                    comp.push_back(w);
                } while (w != f.v);
                std::sort(comp.begin(), comp.end());
                components.push_back(std::move(comp));
            }
            int child = f.v;
            call.pop_back();
            if (!call.empty()) {
                std::size_t p = static_cast<std::size_t>(call.back().v);
                lowlink[p] = std::min(lowlink[p], lowlink[static_cast<std::size_t>(child)]);
            }
        }
    }
    return components;
}

} // namespace

SccDecomposition scc_decompose(const Matrix& m) {
    if (!m.square())
        throw InputError("SCC decomposition needs a square matrix");
    if (!m.all_nonnegative() || !m.all_finite())
        throw InputError("SCC decomposition needs a finite nonnegative matrix");

    SccDecomposition d;
    d.components = tarjan_components(adjacency_lists(m));

    std::vector<int> component_of(m.rows(), 0);
    for (std::size_t c = 0; c < d.components.size(); ++c) {
        for (int v : d.components[c])
            component_of[static_cast<std::size_t>(v)] = static_cast<int>(c);
        d.component_matrices.push_back(m.submatrix(d.components[c]));
        d.permutation.insert(d.permutation.end(), d.components[c].begin(), d.components[c].end());
    }

    int n = static_cast<int>(m.rows());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (m(i, j) != 0.0 &&
                component_of[static_cast<std::size_t>(i)] != component_of[static_cast<std::size_t>(j)])
                d.transitional_entries.push_back({i, j, m(i, j)});
    return d;
}

bool is_irreducible(const Matrix& m) {
    SccDecomposition d = scc_decompose(m);
    if (d.component_count() != 1)
        return false;
    if (m.rows() == 1)
        return m(0, 0) != 0.0;
    return true;
}

namespace {

// Power iteration with a diagonal shift on an irreducible block. The
// shift makes the block primitive, so the iteration converges and the
// Collatz-Wielandt ratios bracket the shifted radius at every step.
SpectralResult irreducible_radius(const Matrix& block, double tol, int max_iter) {
    int n = static_cast<int>(block.rows());
    if (n == 1)
        return {block(0, 0), 0, {1.0}, true};

    double shift = 1e-3 * (1.0 + block.max_row_sum());
    Matrix shifted = block;
    for (int i = 0; i < n; ++i)
        shifted(i, i) += shift;

    std::vector<double> v(static_cast<std::size_t>(n), 1.0 / n);
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    for (int iter = 1; iter <= max_iter; ++iter) {
        std::vector<double> w = shifted * v;
        lo = std::numeric_limits<double>::infinity();
        hi = 0.0;
        for (int i = 0; i < n; ++i) {
            double ratio = w[static_cast<std::size_t>(i)] / v[static_cast<std::size_t>(i)];
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        double norm = 0.0;
        for (double x : w)
            norm += x;
        for (double& x : w)
            x /= norm;
        v = std::move(w);
        if (hi - lo <= tol * std::max(1.0, hi))
            return {0.5 * (lo + hi) - shift, iter, std::move(v), true};
    }
    throw NumericError("spectral radius did not converge within " + std::to_string(max_iter) +
                           " iterations (bracket width " + std::to_string(hi - lo) + ")",
                       0.5 * (lo + hi) - shift);
}

} // namespace

SpectralResult spectral_radius(const Matrix& m, double tol, int max_iter) {
    if (!m.square())
        throw InputError("spectral radius needs a square matrix");
    if (!m.all_nonnegative() || !m.all_finite())
        throw InputError("spectral radius needs a finite nonnegative matrix");
    if (tol <= 0.0)
        throw InputError("eigenvalue tolerance must be positive");

    SccDecomposition d = scc_decompose(m);
    if (d.component_count() == 1) {
        SpectralResult r = irreducible_radius(m, tol, max_iter);
        r.irreducible = (m.rows() > 1) || (m(0, 0) != 0.0);
        return r;
    }

    SpectralResult best;
    best.irreducible = false;
    for (const Matrix& block : d.component_matrices) {
        SpectralResult r = irreducible_radius(block, tol, max_iter);
        best.iterations += r.iterations;
        best.radius = std::max(best.radius, r.radius);
    }
    return best;
}

} // namespace subfractal
