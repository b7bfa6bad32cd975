#include "subfractal/pressure.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include "subfractal/errors.hpp"

namespace subfractal {

namespace {

void check_alphabets(const Presentation& p, const ContractionSystem& c) {
    if (c.alphabet_size() != p.alphabet().size)
        throw InputError("contraction bounds cover " + std::to_string(c.alphabet_size()) +
                         " letters but the alphabet has " + std::to_string(p.alphabet().size));
}

} // namespace

WeightMatrices build_weight_matrices(const TransitionMatrix& tm, const ContractionSystem& c,
                                     double t, BoundSide side) {
    if (!std::isfinite(t))
        throw InputError("weight exponent must be finite");

    WeightMatrices w;
    w.t = t;
    w.side = side;
    bool upper = side == BoundSide::upper;
    int p = tm.label_length();
    std::size_t expected_labels = 1;
    for (int i = 0; i < p; ++i)
        expected_labels *= static_cast<std::size_t>(c.alphabet_size());
    if (tm.labels.size() != expected_labels)
        throw InputError("contraction bounds cover " + std::to_string(c.alphabet_size()) +
                         " letters but the transition matrix was built over a different alphabet");
    for (const Word& label : tm.labels) {
        if (label[p - 1] > c.alphabet_size())
            throw InputError("transition labels use letters outside the contraction bounds");
        double last = upper ? c.upper(label[p - 1]) : c.lower(label[p - 1]);
        w.s_diag.push_back(std::pow(last, t));
        double prod = upper ? c.upper_product(label) : c.lower_product(label);
        w.s0_diag.push_back(std::pow(prod, t));
    }
    return w;
}

double word_sum_via_transfer(const TransitionMatrix& tm, const ContractionSystem& c, double t,
                             BoundSide side, int n) {
    int k = tm.word_length();
    if (n < k)
        throw InputError("transfer word sums need length at least " + std::to_string(k) +
                         ", got " + std::to_string(n));

    std::vector<bool> live = live_vertices(tm.entries);
    std::vector<int> keep;
    for (std::size_t i = 0; i < live.size(); ++i)
        if (live[i])
            keep.push_back(static_cast<int>(i));
    if (keep.empty())
        return 0.0;

    TransitionMatrix restricted;
    restricted.entries = tm.entries.submatrix(keep);
    for (int i : keep)
        restricted.labels.push_back(tm.labels[static_cast<std::size_t>(i)]);

    WeightMatrices w = build_weight_matrices(restricted, c, t, side);
    std::size_t size = restricted.labels.size();
    std::vector<double> v(size, 1.0);
    for (int step = 0; step < n - (k - 1); ++step) {
        for (std::size_t j = 0; j < size; ++j)
            v[j] *= w.s_diag[j];
        v = restricted.entries * v;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < size; ++i)
        sum += w.s0_diag[i] * v[i];
    return sum;
}

PressureEvaluator::PressureEvaluator(const Presentation& p, const ContractionSystem& c,
                                     BoundSide side, std::optional<int> truncation, double eig_tol)
    : contraction_(c), side_(side), truncation_(truncation), eig_tol_(eig_tol) {
    check_alphabets(p, c);
    if (eig_tol <= 0.0)
        throw InputError("eigenvalue tolerance must be positive");
    if (truncation_ && *truncation_ < 1)
        throw InputError("truncation length must be at least 1");

    max_constant_ = side == BoundSide::upper ? c.max_upper() : c.max_lower();
    live_graph_ = live_restriction(p.graph());
    if (live_graph_.vertex_count == 0)
        throw EmptyLanguageError("the subshift language is empty: no window admits an infinite "
                                 "continuation");
    if (!truncation_)
        return;

    if (p.is_sft() && *truncation_ >= p.transition_matrix().word_length()) {
        const TransitionMatrix& tm = p.transition_matrix();
        std::vector<bool> live = live_vertices(tm.entries);
        std::vector<int> keep;
        for (std::size_t i = 0; i < live.size(); ++i)
            if (live[i])
                keep.push_back(static_cast<int>(i));
        TransitionMatrix restricted;
        restricted.entries = tm.entries.submatrix(keep);
        for (int i : keep)
            restricted.labels.push_back(tm.labels[static_cast<std::size_t>(i)]);
        sft_ = std::move(restricted);
    } else {
        bool upper = side_ == BoundSide::upper;
        for (const Word& w : enumerate_graph_words(live_graph_, *truncation_).words)
            word_products_.push_back(upper ? contraction_.upper_product(w)
                                           : contraction_.lower_product(w));
        if (word_products_.empty())
            throw EmptyLanguageError("the subshift has no words of length " +
                                     std::to_string(*truncation_));
    }
}

double PressureEvaluator::operator()(double t) const {
    if (!truncation_) {
        Matrix weighted = weighted_adjacency(live_graph_, contraction_, t,
                                             side_ == BoundSide::upper)
                              .entries;
        return std::log(spectral_radius(weighted, eig_tol_).radius);
    }
    int n = *truncation_;
    double sum = 0.0;
    if (sft_) {
        sum = word_sum_via_transfer(*sft_, contraction_, t, side_, n);
    } else {
        for (double prod : word_products_)
            sum += std::pow(prod, t);
    }
    return std::log(sum) / n;
}

double pressure(const Presentation& p, const ContractionSystem& c, double t, BoundSide side,
                std::optional<int> truncation) {
    return PressureEvaluator(p, c, side, truncation)(t);
}

namespace {

double find_zero(const std::function<double(double)>& pressure_fn, double max_constant,
                 double root_tol, int max_iter) {
    if (root_tol <= 0.0)
        throw InputError("root tolerance must be positive");
    if (max_iter < 1)
        throw InputError("root iteration cap must be positive");

    double p0 = pressure_fn(0.0);
    if (p0 < 0.0)
        throw EmptyLanguageError("pressure is already negative at t = 0; the subshift carries "
                                 "too few words to pin a dimension");

    double hi = std::max(1.0, p0 / -std::log(max_constant)) + 1.0;
    for (int doublings = 0; pressure_fn(hi) > 0.0; ++doublings) {
        if (doublings == 60)
            throw NumericError("could not bracket the pressure zero", hi);
        hi *= 2.0;
    }

    double lo = 0.0;
    double mid = 0.5 * hi;
    for (int iter = 0; iter < max_iter; ++iter) {
        mid = 0.5 * (lo + hi);
        double pm = pressure_fn(mid);
        if (hi - lo <= root_tol && std::abs(pm) <= root_tol)
            return mid;
        if (pm >= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    throw NumericError("pressure zero did not converge within " + std::to_string(max_iter) +
                           " bisection steps",
                       mid);
}

} // namespace

double find_pressure_zero(const PressureEvaluator& p, double root_tol, int max_iter) {
    return find_zero([&](double t) { return p(t); }, p.max_constant(), root_tol, max_iter);
}

std::string dimension_kind_name(DimensionKind k) {
    switch (k) {
    case DimensionKind::hausdorff: return "hausdorff";
    case DimensionKind::packing: return "packing";
    case DimensionKind::lower_box: return "lower_box";
    case DimensionKind::upper_box: return "upper_box";
    }
    return "unknown";
}

namespace {

LabeledGraph subgraph_on(const LabeledGraph& g, const std::vector<int>& vertices) {
    std::vector<int> new_index(static_cast<std::size_t>(g.vertex_count), -1);
    LabeledGraph out;
    out.alphabet_size = g.alphabet_size;
    for (int v : vertices) {
        new_index[static_cast<std::size_t>(v)] = out.vertex_count++;
        out.vertex_names.push_back(g.vertex_name(v));
    }
    for (const LabeledEdge& e : g.edges) {
        int f = new_index[static_cast<std::size_t>(e.from)];
        int t = new_index[static_cast<std::size_t>(e.to)];
        if (f >= 0 && t >= 0)
            out.edges.push_back({f, t, e.label});
    }
    return out;
}

int resolve_thread_count(int requested, std::size_t tasks) {
    int threads = requested;
    if (threads <= 0) {
        if (const char* env = std::getenv("SUBSHIFTDIM_THREADS"))
            threads = std::atoi(env);
    }
    if (threads <= 0)
        threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1)
        threads = 1;
    return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(threads), tasks));
}

void run_parallel(std::size_t tasks, int threads, const std::function<void(std::size_t)>& work) {
    if (threads <= 1) {
        for (std::size_t i = 0; i < tasks; ++i)
            work(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= tasks)
                return;
            try {
                work(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i)
        pool.emplace_back(worker);
    for (std::thread& th : pool)
        th.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

} // namespace

DimensionReport dimension_bounds(const Presentation& p, const ContractionSystem& c,
                                 const BoundsOptions& options) {
    check_alphabets(p, c);
    LabeledGraph live = live_restriction(p.graph());
    if (live.vertex_count == 0)
        throw EmptyLanguageError("the subshift language is empty: no window admits an infinite "
                                 "continuation");

    DimensionReport report;
    if (!p.right_resolving()) {
        report.lower_certified = false;
        report.notes.push_back("presentation is not right-resolving: matrix word sums may "
                               "overcount, so the bracket is certified on the upper side only");
    }
    if (is_irreducible(live.adjacency())) {
        report.irreducible = true;
        report.applies_to = {DimensionKind::hausdorff, DimensionKind::packing,
                             DimensionKind::lower_box, DimensionKind::upper_box};
        PressureEvaluator lower_p(p, c, BoundSide::lower, std::nullopt, options.eig_tol);
        PressureEvaluator upper_p(p, c, BoundSide::upper, std::nullopt, options.eig_tol);
        const PressureEvaluator* evals[2] = {&lower_p, &upper_p};
        double roots[2] = {0.0, 0.0};
        int threads = resolve_thread_count(options.threads, 2);
        run_parallel(2, threads, [&](std::size_t i) {
            roots[i] = find_pressure_zero(*evals[i], options.root_tol, default_root_max_iter);
        });
        report.h = roots[0];
        report.H = roots[1];
        return report;
    }

    report.irreducible = false;
    report.applies_to = {DimensionKind::hausdorff};
    report.notes.push_back("reducible weighted adjacency: the bracket is certified for the "
                           "Hausdorff dimension only");

    SccDecomposition d = scc_decompose(live.adjacency());
    for (const TransitionalEntry& e : d.transitional_entries)
        report.transitional.push_back({live.vertex_name(e.from), live.vertex_name(e.to)});
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < d.component_count(); ++i) {
        const std::vector<int>& verts = d.components[i];
        if (verts.size() == 1 && d.component_matrices[i](0, 0) == 0.0)
            continue; // transient window, carries no infinite orbit of its own
        active.push_back(i);
    }

    std::vector<ComponentBound> bounds(active.size());
    int threads = resolve_thread_count(options.threads, active.size());
    run_parallel(active.size(), threads, [&](std::size_t slot) {
        const std::vector<int>& verts = d.components[active[slot]];
        ComponentBound& b = bounds[slot];
        b.vertices = verts;
        for (int v : verts)
            b.vertex_names.push_back(live.vertex_name(v));

        LabeledGraph sub = subgraph_on(live, verts);
        double cycle_count = spectral_radius(sub.adjacency(), options.eig_tol).radius;
        if (cycle_count <= 1.0 + 1e-9) {
            b.degenerate = true;
            b.h = b.H = 0.0;
            return;
        }
        for (BoundSide side : {BoundSide::lower, BoundSide::upper}) {
            bool upper = side == BoundSide::upper;
            auto fn = [&](double t) {
                Matrix w = weighted_adjacency(sub, c, t, upper).entries;
                return std::log(spectral_radius(w, options.eig_tol).radius);
            };
            double max_const = upper ? c.max_upper() : c.max_lower();
            double root = find_zero(fn, max_const, options.root_tol, default_root_max_iter);
            (upper ? b.H : b.h) = root;
        }
    });

    for (ComponentBound& b : bounds) {
        b.id = static_cast<int>(report.components.size());
        report.h = std::max(report.h, b.h);
        report.H = std::max(report.H, b.H);
        if (b.degenerate)
            report.notes.push_back("component {" + b.vertex_names.front() +
                                   (b.vertex_names.size() > 1 ? ", ..." : "") +
                                   "} is a single periodic orbit; it contributes dimension 0");
        report.components.push_back(std::move(b));
    }
    return report;
}

double cylinder_measure(const Presentation& p, const ContractionSystem& c, const Word& w, int n,
                        double h, BoundSide side, std::size_t cap) {
    check_alphabets(p, c);
    if (!w.valid_over(p.alphabet()))
        throw InputError("cylinder word " + w.str() + " uses letters outside the alphabet");
    if (n < 0)
        throw InputError("cylinder depth must be nonnegative");

    bool upper = side == BoundSide::upper;
    WordSet words = p.enumerate_allowed_words(n + w.length(), cap);
    double numer = 0.0;
    double denom = 0.0;
    for (const Word& tau : words.words) {
        double mass = std::pow(upper ? c.upper_product(tau) : c.lower_product(tau), h);
        denom += mass;
        if (tau.starts_with(w))
            numer += mass;
    }
    if (denom == 0.0)
        throw EmptyLanguageError("no words of length " + std::to_string(n + w.length()) +
                                 " to distribute measure over");
    return numer / denom;
}

std::vector<BoundednessRow> boundedness_diagnostics(const Presentation& p,
                                                    const ContractionSystem& c, double h, double H,
                                                    const std::vector<int>& lengths,
                                                    std::size_t cap) {
    check_alphabets(p, c);
    LabeledGraph live = live_restriction(p.graph());
    if (live.vertex_count == 0)
        throw EmptyLanguageError("the subshift language is empty");
    if (!is_irreducible(live.adjacency()))
        throw NotApplicableError("bounded weighted sums characterize the dimension bracket only "
                                 "for an irreducible weighted adjacency");

    std::vector<BoundednessRow> rows;
    for (int n : lengths) {
        if (n < 1)
            throw InputError("diagnostic word lengths must be positive");
        BoundednessRow row;
        row.n = n;
        bool transfer_ok = p.is_sft() && n >= p.transition_matrix().word_length();
        if (transfer_ok) {
            row.lower_sum = word_sum_via_transfer(p.transition_matrix(), c, h, BoundSide::lower, n);
            row.upper_sum = word_sum_via_transfer(p.transition_matrix(), c, H, BoundSide::upper, n);
        } else {
            for (const Word& w : p.enumerate_allowed_words(n, cap).words) {
                row.lower_sum += std::pow(c.lower_product(w), h);
                row.upper_sum += std::pow(c.upper_product(w), H);
            }
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace subfractal
