#include "subfractal/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "subfractal/errors.hpp"
#include "subfractal/pressure.hpp"
#include "subfractal/sofic.hpp"
#include "subfractal/symbolic.hpp"

namespace subfractal {

namespace {

SelftestResult check_close(const std::string& name, double got, double want, double tol) {
    SelftestResult r;
    r.name = name;
    r.passed = std::abs(got - want) <= tol;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "got %.15g, want %.15g (tol %g)", got, want, tol);
    r.detail = buf;
    return r;
}

LabeledGraph even_shift_graph() {
    LabeledGraph g;
    g.vertex_count = 2;
    g.alphabet_size = 2;
    g.vertex_names = {"even", "odd"};
    g.edges = {{0, 0, 1}, {0, 1, 2}, {1, 0, 2}};
    return g;
}

} // namespace

std::vector<SelftestResult> run_selftests() {
    std::vector<SelftestResult> results;
    const double phi = 0.5 * (1.0 + std::sqrt(5.0));

    try {
        Alphabet two(2);
        Presentation gap(two, normalize_forbidden_set({Word{2, 2}}, two));
        ContractionSystem thirds(std::vector<double>{1.0 / 3.0, 1.0 / 3.0});
        DimensionReport r = dimension_bounds(gap, thirds);
        results.push_back(check_close("middle-third system avoiding the doubled second letter",
                                      r.h, std::log(phi) / std::log(3.0), 1e-9));
        results.push_back(
            check_close("matching lower and upper bounds for exact ratios", r.H - r.h,
                        0.0, 1e-12));
    } catch (const Error& e) {
        results.push_back({"middle-third system avoiding the doubled second letter", false,
                           e.what()});
    }

    try {
        Alphabet three(3);
        Presentation full(three, ForbiddenSet::empty_set());
        ContractionSystem halves(std::vector<double>{0.5, 0.5, 0.5});
        DimensionReport r = dimension_bounds(full, halves);
        results.push_back(check_close("full shift on three halving maps", r.h,
                                      std::log(3.0) / std::log(2.0), 1e-9));
    } catch (const Error& e) {
        results.push_back({"full shift on three halving maps", false, e.what()});
    }

    try {
        Alphabet two(2);
        Presentation even(two, even_shift_graph());
        ContractionSystem halves(std::vector<double>{0.5, 0.5});
        DimensionReport r = dimension_bounds(even, halves);
        results.push_back(check_close("even constraint graph on two halving maps", r.h,
                                      std::log(phi) / std::log(2.0), 1e-9));
    } catch (const Error& e) {
        results.push_back({"even constraint graph on two halving maps", false, e.what()});
    }

    try {
        Alphabet two(2);
        ForbiddenSet fs = normalize_forbidden_set({Word{1, 1, 2}, Word{2, 1, 1}, Word{2, 2, 2}},
                                                  two);
        TransitionMatrix tm = build_transition_matrix(fs, two);
        ContractionSystem c(std::vector<double>{0.4, 0.3});
        double via_transfer = word_sum_via_transfer(tm, c, 0.7, BoundSide::lower, 6);
        double via_words = 0.0;
        for (const Word& w : enumerate_sft_words(fs, two, 6).words)
            via_words += std::pow(c.lower_product(w), 0.7);
        results.push_back(check_close("transfer sums agree with direct enumeration",
                                      via_transfer, via_words, 1e-12));
    } catch (const Error& e) {
        results.push_back({"transfer sums agree with direct enumeration", false, e.what()});
    }

    try {
        Alphabet two(2);
        ContractionSystem halves(std::vector<double>{0.5, 0.5});
        WordSumSandwich s = word_sum_sandwich(even_shift_graph(), halves, 0.0, 3, false);
        bool ok = s.lower_bound == 4.0 && s.word_sum == 7.0 && s.matrix_sum == 8.0;
        char buf[128];
        std::snprintf(buf, sizeof(buf), "got (%g, %g, %g), want (4, 7, 8)", s.lower_bound,
                      s.word_sum, s.matrix_sum);
        results.push_back({"path-count bracket on the even constraint graph", ok, buf});
    } catch (const Error& e) {
        results.push_back({"path-count bracket on the even constraint graph", false, e.what()});
    }

    return results;
}

} // namespace subfractal
