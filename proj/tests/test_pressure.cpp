#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "oracles.hpp"
#include "subfractal/contraction.hpp"
#include "subfractal/errors.hpp"
#include "subfractal/pressure.hpp"
#include "subfractal/sofic.hpp"
#include "subfractal/symbolic.hpp"

using namespace subfractal;

namespace {

Presentation sft(const std::vector<Word>& raw, int m) {
    Alphabet a(m);
    return Presentation(a, normalize_forbidden_set(raw, a));
}

LabeledGraph even_run_graph() {
    LabeledGraph g;
    g.vertex_count = 2;
    g.alphabet_size = 2;
    g.vertex_names = {"even", "odd"};
    g.edges = {{0, 0, 1}, {0, 1, 2}, {1, 0, 2}};
    return g;
}

const double phi = (1.0 + std::sqrt(5.0)) / 2.0;

} // namespace

TEST_CASE("weight diagonals attach contraction powers to the matrix labels") {
    Alphabet two(2);
    TransitionMatrix tm =
        build_transition_matrix(normalize_forbidden_set({Word{2, 2}}, two), two);
    ContractionSystem third({1.0 / 3.0, 1.0 / 3.0});

    WeightMatrices w = build_weight_matrices(tm, third, 1.0, BoundSide::lower);
    CHECK(w.s_diag == std::vector<double>{1.0 / 3.0, 1.0 / 3.0});
    CHECK(w.s0_diag == std::vector<double>{1.0 / 3.0, 1.0 / 3.0});

    w = build_weight_matrices(tm, third, 0.0, BoundSide::lower);
    CHECK(w.s_diag == std::vector<double>{1.0, 1.0});
    CHECK(w.s0_diag == std::vector<double>{1.0, 1.0});

    TransitionMatrix quad = build_transition_matrix(
        normalize_forbidden_set({Word{1, 1, 2}, Word{2, 1, 1}, Word{2, 2, 2}}, two), two);
    ContractionSystem mixed({0.4, 0.3});
    w = build_weight_matrices(quad, mixed, 1.0, BoundSide::lower);
    CHECK(w.s_diag == std::vector<double>{0.4, 0.3, 0.4, 0.3});
    REQUIRE(w.s0_diag.size() == 4);
    CHECK(w.s0_diag[0] == doctest::Approx(0.16).epsilon(1e-15));
    CHECK(w.s0_diag[1] == doctest::Approx(0.12).epsilon(1e-15));
    CHECK(w.s0_diag[2] == doctest::Approx(0.12).epsilon(1e-15));
    CHECK(w.s0_diag[3] == doctest::Approx(0.09).epsilon(1e-15));

    ContractionSystem wide({0.3, 0.3}, {0.5, 0.5});
    CHECK(build_weight_matrices(tm, wide, 1.0, BoundSide::upper).s_diag ==
          std::vector<double>{0.5, 0.5});

    ContractionSystem wrong({0.5, 0.5, 0.5});
    CHECK_THROWS_AS(build_weight_matrices(tm, wrong, 1.0, BoundSide::lower), InputError);
}

TEST_CASE("transfer word sums on pinned fixtures") {
    Alphabet two(2);
    TransitionMatrix golden =
        build_transition_matrix(normalize_forbidden_set({Word{2, 2}}, two), two);
    ContractionSystem third({1.0 / 3.0, 1.0 / 3.0});
    CHECK(word_sum_via_transfer(golden, third, 1.0, BoundSide::lower, 3) ==
          doctest::Approx(5.0 / 27.0).epsilon(1e-15));

    TransitionMatrix full = build_transition_matrix(ForbiddenSet::empty_set(), two);
    ContractionSystem half({0.5, 0.5});
    for (int n = 2; n <= 8; ++n)
        CHECK(word_sum_via_transfer(full, half, 1.0, BoundSide::lower, n) == 1.0);

    TransitionMatrix quad = build_transition_matrix(
        normalize_forbidden_set({Word{1, 1, 2}, Word{2, 1, 1}, Word{2, 2, 2}}, two), two);
    CHECK(word_sum_via_transfer(quad, half, 1.0, BoundSide::lower, 4) ==
          doctest::Approx(6.0 / 16.0).epsilon(1e-15));

    CHECK_THROWS_AS(word_sum_via_transfer(golden, third, 1.0, BoundSide::lower, 1), InputError);
    CHECK_THROWS_AS(word_sum_via_transfer(quad, half, 1.0, BoundSide::lower, 2), InputError);
}

TEST_CASE("transfer word sums equal exhaustive enumeration sums") {
    struct Fixture {
        int m;
        std::vector<Word> raw;
        ContractionSystem c;
    };
    std::vector<Fixture> fixtures{
        {2, {Word{2, 2}}, ContractionSystem({1.0 / 3.0, 1.0 / 3.0})},
        {2, {Word{1, 2}}, ContractionSystem({0.45, 0.3})},
        {2,
         {Word{1, 1, 2}, Word{2, 1, 1}, Word{2, 2, 2}},
         ContractionSystem({0.5, 0.4}, {0.6, 0.5})},
        {2, {}, ContractionSystem({0.5, 0.5})},
        {3, {Word{1, 2}, Word{2, 3}, Word{3, 1}}, ContractionSystem({0.2, 0.3, 0.25})},
        {3, {Word{1, 1, 1}}, ContractionSystem({0.3, 0.3, 0.3})},
    };
    for (const auto& fx : fixtures) {
        Alphabet a(fx.m);
        ForbiddenSet f = normalize_forbidden_set(fx.raw, a);
        TransitionMatrix tm = build_transition_matrix(f, a);
        for (double t : {0.0, 0.5, 1.0}) {
            for (int n = tm.word_length(); n <= 12; ++n) {
                for (BoundSide side : {BoundSide::lower, BoundSide::upper}) {
                    double mine = word_sum_via_transfer(tm, fx.c, t, side, n);
                    double ref =
                        oracle::sft_word_sum(f, a, fx.c, t, side == BoundSide::upper, n);
                    CHECK(std::abs(mine - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
                }
            }
        }
    }
}

TEST_CASE("spectral pressure of pinned fixtures") {
    ContractionSystem third({1.0 / 3.0, 1.0 / 3.0});
    Presentation golden = sft({Word{2, 2}}, 2);
    CHECK(pressure(golden, third, 0.0, BoundSide::lower) ==
          doctest::Approx(std::log(phi)).epsilon(1e-9));

    ContractionSystem half3({0.5, 0.5, 0.5});
    Presentation full3 = sft({}, 3);
    for (double t : {0.0, 0.7, 1.5, 2.0})
        CHECK(pressure(full3, half3, t, BoundSide::lower) ==
              doctest::Approx(std::log(3.0) - t * std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("truncated pressure approaches the spectral value") {
    ContractionSystem third({1.0 / 3.0, 1.0 / 3.0});
    Presentation golden = sft({Word{2, 2}}, 2);
    Presentation even(Alphabet(2), even_run_graph());
    ContractionSystem half({0.5, 0.5});

    struct Case {
        const Presentation* p;
        const ContractionSystem* c;
        std::vector<int> lengths; // graph input enumerates, so stay under the cap
    };
    for (const auto& [p, c, lengths] :
         {Case{&golden, &third, {5, 10, 20, 40}}, Case{&even, &half, {5, 10, 20}}}) {
        for (double t : {0.0, 0.5, 1.0}) {
            double exact = pressure(*p, *c, t, BoundSide::lower);
            double prev_gap = 0.0;
            for (int n : lengths) {
                double gap = std::abs(pressure(*p, *c, t, BoundSide::lower, n) - exact);
                CHECK(gap <= 3.0 / n);
                if (n == 40)
                    CHECK(gap <= 2e-2);
                if (n > 5)
                    CHECK(gap <= prev_gap + 1e-12);
                prev_gap = gap;
            }
        }
    }

    // Truncated values are exactly (1/n) log of the weighted word count
    // at t = 0.
    CHECK(pressure(even, half, 0.0, BoundSide::lower, 3) ==
          doctest::Approx(std::log(7.0) / 3.0).epsilon(1e-15));
    Presentation golden2 = sft({Word{2, 2}}, 2);
    CHECK(pressure(golden2, third, 0.0, BoundSide::lower, 1) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("pressure evaluator validates its inputs") {
    Presentation golden = sft({Word{2, 2}}, 2);
    ContractionSystem third({1.0 / 3.0, 1.0 / 3.0});
    CHECK_THROWS_AS(PressureEvaluator(golden, third, BoundSide::lower, std::nullopt, 0.0),
                    InputError);
    CHECK_THROWS_AS(PressureEvaluator(golden, third, BoundSide::lower, 0), InputError);
    CHECK_THROWS_AS(PressureEvaluator(golden, ContractionSystem({0.5, 0.5, 0.5}),
                                      BoundSide::lower),
                    InputError);

    LabeledGraph dead;
    dead.vertex_count = 1;
    dead.alphabet_size = 1;
    Presentation hollow(Alphabet(1), dead);
    CHECK_THROWS_AS(PressureEvaluator(hollow, ContractionSystem({0.5}), BoundSide::lower),
                    EmptyLanguageError);

    ContractionSystem wide({0.25, 1.0 / 3.0}, {0.4, 0.5});
    PressureEvaluator lo(golden, wide, BoundSide::lower);
    PressureEvaluator hi(golden, wide, BoundSide::upper);
    CHECK(lo.max_constant() == 1.0 / 3.0);
    CHECK(hi.max_constant() == 0.5);
}

TEST_CASE("pressure decreases with an explicit slope gap and is convex") {
    struct Fixture {
        Presentation p;
        ContractionSystem c;
    };
    std::vector<Fixture> fixtures;
    fixtures.push_back({sft({Word{2, 2}}, 2), ContractionSystem({1.0 / 3.0, 1.0 / 3.0})});
    fixtures.push_back({sft({}, 3), ContractionSystem({0.5, 0.5, 0.5})});
    fixtures.push_back({Presentation(Alphabet(2), even_run_graph()),
                        ContractionSystem({0.5, 0.4})});
    fixtures.push_back({sft({Word{1, 1, 2}, Word{2, 1, 1}, Word{2, 2, 2}}, 2),
                        ContractionSystem({0.4, 0.3}, {0.5, 0.45})});

    const double delta = 0.25;
    for (const auto& fx : fixtures) {
        for (BoundSide side : {BoundSide::lower, BoundSide::upper}) {
            PressureEvaluator eval(fx.p, fx.c, side);
            double h = find_pressure_zero(eval);
            for (double t : {0.0, h, 2.0 * h}) {
                double gap = delta * std::log(eval.max_constant());
                CHECK(eval(t + delta) <= eval(t) + gap + 1e-9);
            }
            for (double a : {0.0, 0.5 * h}) {
                for (double b : {h, 2.0 * h + 0.5}) {
                    for (double lambda : {0.25, 0.5, 0.75}) {
                        double mid = lambda * a + (1.0 - lambda) * b;
                        CHECK(eval(mid) <=
                              lambda * eval(a) + (1.0 - lambda) * eval(b) + 1e-9);
                    }
                }
            }
        }
    }
}

TEST_CASE("pressure zeros of closed-form fixtures") {
    PressureEvaluator moran2(sft({}, 2), ContractionSystem({0.5, 0.5}), BoundSide::lower);
    CHECK(find_pressure_zero(moran2) == doctest::Approx(1.0).epsilon(1e-8));

    PressureEvaluator moran3(sft({}, 3), ContractionSystem({0.5, 0.5, 0.5}),
                             BoundSide::lower);
    CHECK(find_pressure_zero(moran3) ==
          doctest::Approx(std::log(3.0) / std::log(2.0)).epsilon(1e-8));

    PressureEvaluator cantor(sft({}, 2),
                             ContractionSystem({1.0 / 3.0, 1.0 / 3.0}), BoundSide::lower);
    CHECK(find_pressure_zero(cantor) ==
          doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(1e-8));

    PressureEvaluator golden(sft({Word{2, 2}}, 2),
                             ContractionSystem({1.0 / 3.0, 1.0 / 3.0}), BoundSide::lower);
    double root = find_pressure_zero(golden);
    CHECK(root == doctest::Approx(std::log(phi) / std::log(3.0)).epsilon(1e-6));
    CHECK(std::abs(golden(root)) <= default_root_tol);

    PressureEvaluator even(Presentation(Alphabet(2), even_run_graph()),
                           ContractionSystem({0.5, 0.5}), BoundSide::lower);
    CHECK(find_pressure_zero(even) ==
          doctest::Approx(std::log(phi) / std::log(2.0)).epsilon(1e-6));

    // A single periodic orbit has pressure exactly 0 at t = 0.
    PressureEvaluator orbit(sft({Word{1, 1}, Word{1, 2}}, 2),
                            ContractionSystem({0.5, 0.5}), BoundSide::lower);
    CHECK(find_pressure_zero(orbit) == doctest::Approx(0.0).epsilon(1e-8));

    CHECK_THROWS_AS(find_pressure_zero(golden, 0.0), InputError);
    CHECK_THROWS_AS(find_pressure_zero(golden, 1e-10, 0), InputError);
    try {
        find_pressure_zero(golden, 1e-10, 3);
        FAIL("expected a convergence failure");
    } catch (const NumericError& e) {
        CHECK(e.best_estimate() >= 0.0);
    }

    double coarse = find_pressure_zero(golden, 1e-3);
    CHECK(std::abs(coarse - std::log(phi) / std::log(3.0)) <= 1e-3);
}

TEST_CASE("dimension bounds on an irreducible presentation") {
    DimensionReport r = dimension_bounds(sft({Word{2, 2}}, 2),
                                         ContractionSystem({1.0 / 3.0, 1.0 / 3.0}));
    double expected = std::log(phi) / std::log(3.0);
    CHECK(r.h == doctest::Approx(expected).epsilon(1e-9));
    CHECK(r.H == doctest::Approx(expected).epsilon(1e-9));
    CHECK(r.irreducible);
    CHECK(r.lower_certified);
    CHECK(r.components.empty());
    CHECK(r.transitional.empty());
    REQUIRE(r.applies_to.size() == 4);
    CHECK(r.applies_to[0] == DimensionKind::hausdorff);

    DimensionReport wide = dimension_bounds(sft({Word{2, 2}}, 2),
                                            ContractionSystem({0.3, 0.3}, {0.4, 0.4}));
    CHECK(wide.h == doctest::Approx(std::log(phi) / -std::log(0.3)).epsilon(1e-9));
    CHECK(wide.H == doctest::Approx(std::log(phi) / -std::log(0.4)).epsilon(1e-9));
    CHECK(wide.h < wide.H);
}

TEST_CASE("dimension bounds on a reducible presentation") {
    Presentation quad = sft({Word{1, 1, 2}, Word{2, 1, 1}, Word{2, 2, 2}}, 2);
    ContractionSystem half({0.5, 0.5});
    DimensionReport r = dimension_bounds(quad, half);

    CHECK_FALSE(r.irreducible);
    REQUIRE(r.applies_to.size() == 1);
    CHECK(r.applies_to[0] == DimensionKind::hausdorff);
    REQUIRE(r.components.size() == 2);

    CHECK(r.components[0].id == 0);
    CHECK(r.components[0].vertex_names == std::vector<std::string>{"11"});
    CHECK(r.components[0].degenerate);
    CHECK(r.components[0].h == 0.0);
    CHECK(r.components[0].H == 0.0);

    CHECK(r.components[1].id == 1);
    CHECK(r.components[1].vertex_names ==
          std::vector<std::string>{"12", "21", "22"});
    CHECK_FALSE(r.components[1].degenerate);
    // Growth rate of the nontrivial block: the real root of x^3 = x + 1.
    double plastic = std::cbrt(0.5 + std::sqrt(23.0 / 108.0)) +
                     std::cbrt(0.5 - std::sqrt(23.0 / 108.0));
    double expected = std::log(plastic) / std::log(2.0);
    CHECK(r.components[1].h == doctest::Approx(expected).epsilon(1e-9));
    CHECK(r.components[1].H == doctest::Approx(expected).epsilon(1e-9));

    CHECK(r.h == doctest::Approx(expected).epsilon(1e-9));
    CHECK(r.H == r.h);
    CHECK(r.transitional.empty());
    REQUIRE_FALSE(r.notes.empty());
    CHECK(r.notes[0].find("reducible") != std::string::npos);
}

TEST_CASE("transitional edges are reported by vertex name") {
    DimensionReport r = dimension_bounds(sft({Word{1, 2}}, 2), ContractionSystem({0.5, 0.5}));
    CHECK_FALSE(r.irreducible);
    CHECK(r.h == 0.0);
    CHECK(r.H == 0.0);
    REQUIRE(r.components.size() == 2);
    CHECK(r.components[0].degenerate);
    CHECK(r.components[1].degenerate);
    REQUIRE(r.transitional.size() == 1);
    CHECK(r.transitional[0].from == "2");
    CHECK(r.transitional[0].to == "1");
}

TEST_CASE("equal diagonal blocks give the same bracket as one block alone") {
    LabeledGraph twin;
    twin.vertex_count = 4;
    twin.alphabet_size = 2;
    twin.vertex_names = {"a1", "a2", "b1", "b2"};
    twin.edges = {{0, 0, 1}, {0, 1, 2}, {1, 0, 1}, {2, 2, 1}, {2, 3, 2}, {3, 2, 1}};
    ContractionSystem third({1.0 / 3.0, 1.0 / 3.0});

    DimensionReport two_copies = dimension_bounds(Presentation(Alphabet(2), twin), third);
    DimensionReport one_copy = dimension_bounds(sft({Word{2, 2}}, 2), third);
    CHECK_FALSE(two_copies.irreducible);
    REQUIRE(two_copies.components.size() == 2);
    CHECK(std::abs(two_copies.h - one_copy.h) <= 1e-10);
    CHECK(std::abs(two_copies.H - one_copy.H) <= 1e-10);
}

TEST_CASE("uncertified lower bounds are flagged for ambiguous graphs") {
    LabeledGraph g = even_run_graph();
    g.edges.push_back({0, 1, 1});
    DimensionReport r =
        dimension_bounds(Presentation(Alphabet(2), g), ContractionSystem({0.5, 0.5}));
    CHECK_FALSE(r.lower_certified);
    REQUIRE_FALSE(r.notes.empty());
    CHECK(r.notes[0].find("upper side") != std::string::npos);
    CHECK(r.h > 0.0);
    CHECK(r.h <= r.H);
}

TEST_CASE("dimension bounds of an empty language fail loudly") {
    LabeledGraph dead;
    dead.vertex_count = 1;
    dead.alphabet_size = 1;
    CHECK_THROWS_AS(
        dimension_bounds(Presentation(Alphabet(1), dead), ContractionSystem({0.5})),
        EmptyLanguageError);
}

TEST_CASE("thread count does not change the result") {
    Presentation quad = sft({Word{1, 1, 2}, Word{2, 1, 1}, Word{2, 2, 2}}, 2);
    ContractionSystem half({0.5, 0.5});

    BoundsOptions serial;
    serial.threads = 1;
    BoundsOptions parallel;
    parallel.threads = 4;
    DimensionReport a = dimension_bounds(quad, half, serial);
    DimensionReport b = dimension_bounds(quad, half, parallel);
    CHECK(a.h == b.h);
    CHECK(a.H == b.H);
    REQUIRE(a.components.size() == b.components.size());
    for (std::size_t i = 0; i < a.components.size(); ++i) {
        CHECK(a.components[i].h == b.components[i].h);
        CHECK(a.components[i].H == b.components[i].H);
    }

    setenv("SUBSHIFTDIM_THREADS", "3", 1);
    BoundsOptions from_env; // threads = 0 defers to the environment
    DimensionReport c = dimension_bounds(quad, half, from_env);
    unsetenv("SUBSHIFTDIM_THREADS");
    CHECK(c.h == a.h);
    CHECK(c.H == a.H);
}

TEST_CASE("cylinder measures are consistent across depths") {
    Presentation golden = sft({Word{2, 2}}, 2);
    ContractionSystem third({1.0 / 3.0, 1.0 / 3.0});
    double h = dimension_bounds(golden, third).h;

    for (int len = 0; len <= 4; ++len) {
        for (const Word& w : enumerate_sft_words(golden.forbidden(), golden.alphabet(), len)
                                 .words) {
            for (int n = 1; n <= 8; ++n) {
                double parent = cylinder_measure(golden, third, w, n + 1, h, BoundSide::lower);
                double children = 0.0;
                for (int letter = 1; letter <= 2; ++letter)
                    children +=
                        cylinder_measure(golden, third, w.append(letter), n, h,
                                         BoundSide::lower);
                CHECK(std::abs(parent - children) <= 1e-12);
            }
        }
    }
}

TEST_CASE("cylinder measures on pinned fixtures") {
    Presentation full = sft({}, 2);
    ContractionSystem half({0.5, 0.5});
    for (int n = 1; n <= 4; ++n)
        CHECK(cylinder_measure(full, half, Word{1}, n, 1.0, BoundSide::lower) ==
              doctest::Approx(0.5).epsilon(1e-12));

    CHECK(cylinder_measure(full, half, Word{}, 3, 1.0, BoundSide::lower) ==
          doctest::Approx(1.0).epsilon(1e-12));

    Presentation golden = sft({Word{2, 2}}, 2);
    ContractionSystem third({1.0 / 3.0, 1.0 / 3.0});
    double h = dimension_bounds(golden, third).h;
    CHECK(cylinder_measure(golden, third, Word{2, 2}, 4, h, BoundSide::lower) == 0.0);
    CHECK(cylinder_measure(golden, third, Word{2, 2, 1}, 4, h, BoundSide::lower) == 0.0);
    CHECK(cylinder_measure(golden, third, Word{1}, 4, h, BoundSide::lower) > 0.0);

    CHECK_THROWS_AS(cylinder_measure(golden, third, Word{3}, 2, h, BoundSide::lower),
                    InputError);
    CHECK_THROWS_AS(cylinder_measure(golden, third, Word{1}, -1, h, BoundSide::lower),
                    InputError);

    // Graph presentations go through enumeration; consistency holds there
    // too.
    Presentation even(Alphabet(2), even_run_graph());
    ContractionSystem halves({0.5, 0.5});
    double he = dimension_bounds(even, halves).h;
    for (const Word& w : {Word{1}, Word{2}, Word{2, 2}}) {
        double parent = cylinder_measure(even, halves, w, 5, he, BoundSide::lower);
        double children = cylinder_measure(even, halves, w.append(1), 4, he, BoundSide::lower) +
                          cylinder_measure(even, halves, w.append(2), 4, he, BoundSide::lower);
        CHECK(std::abs(parent - children) <= 1e-12);
    }
}

TEST_CASE("bounded word sums at the dimension bracket") {
    Presentation full = sft({}, 2);
    ContractionSystem half({0.5, 0.5});
    std::vector<int> lengths;
    for (int n = 1; n <= 10; ++n)
        lengths.push_back(n);
    for (const BoundednessRow& row : boundedness_diagnostics(full, half, 1.0, 1.0, lengths)) {
        CHECK(row.lower_sum == 1.0);
        CHECK(row.upper_sum == 1.0);
    }

    Presentation golden = sft({Word{2, 2}}, 2);
    ContractionSystem third({1.0 / 3.0, 1.0 / 3.0});
    DimensionReport r = dimension_bounds(golden, third);
    lengths.clear();
    for (int n = 5; n <= 25; ++n)
        lengths.push_back(n);
    for (const BoundednessRow& row :
         boundedness_diagnostics(golden, third, r.h, r.H, lengths)) {
        CHECK(row.lower_sum >= 1.0 - 1e-9);
        CHECK(row.lower_sum <= 1.7);
        CHECK(row.upper_sum >= 1.0 - 1e-9);
        CHECK(row.upper_sum <= 1.7);
    }

    // Above the bracket the sums decay geometrically.
    std::vector<BoundednessRow> above =
        boundedness_diagnostics(golden, third, r.h + 0.1, r.H + 0.1, {10, 20});
    CHECK(above[1].lower_sum < 0.5 * above[0].lower_sum);
    CHECK(above[1].upper_sum < 0.5 * above[0].upper_sum);

    Presentation quad = sft({Word{1, 1, 2}, Word{2, 1, 1}, Word{2, 2, 2}}, 2);
    CHECK_THROWS_AS(boundedness_diagnostics(quad, half, 0.4, 0.4, {5}), NotApplicableError);
    CHECK_THROWS_AS(boundedness_diagnostics(golden, third, r.h, r.H, {0}), InputError);
    CHECK(boundedness_diagnostics(golden, third, r.h, r.H, {}).empty());
}
