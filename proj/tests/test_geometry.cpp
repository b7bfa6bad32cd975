#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "subfractal/contraction.hpp"
#include "subfractal/errors.hpp"
#include "subfractal/geometry.hpp"
#include "subfractal/sofic.hpp"
#include "subfractal/symbolic.hpp"

using namespace subfractal;

namespace {

AffineMap map1d(double scale, double offset) {
    AffineMap m;
    m.dimension = 1;
    m.linear = {scale, 0.0, 0.0, 0.0};
    m.offset = {offset, 0.0};
    return m;
}

AffineMap map2d(std::array<double, 4> linear, std::array<double, 2> offset) {
    AffineMap m;
    m.dimension = 2;
    m.linear = linear;
    m.offset = offset;
    return m;
}

AffineIFS cantor_ifs() {
    return AffineIFS(1, {map1d(1.0 / 3.0, 0.0), map1d(1.0 / 3.0, 2.0 / 3.0)});
}

AffineIFS sierpinski_ifs() {
    return AffineIFS(2, {map2d({0.5, 0.0, 0.0, 0.5}, {0.0, 0.0}),
                         map2d({0.5, 0.0, 0.0, 0.5}, {0.5, 0.0}),
                         map2d({0.5, 0.0, 0.0, 0.5}, {0.25, std::sqrt(3.0) / 4.0})});
}

Presentation sft(const std::vector<Word>& raw, int m) {
    Alphabet a(m);
    return Presentation(a, normalize_forbidden_set(raw, a));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("boxes measure extent, center, and membership") {
    Box b;
    b.dimension = 1;
    b.lo = {0.0, 0.0};
    b.hi = {1.0, 0.0};
    CHECK(b.extent() == 1.0);
    CHECK(b.center()[0] == 0.5);
    CHECK(b.contains({0.5, 0.0}));
    CHECK_FALSE(b.contains({-1e-12, 0.0}));
    CHECK(b.contains({-1e-12, 0.0}, 1e-9));

    Box r;
    r.dimension = 2;
    r.lo = {0.0, 0.0};
    r.hi = {2.0, 1.0};
    CHECK(r.extent() == 2.0);
    CHECK(r.center()[0] == 1.0);
    CHECK(r.center()[1] == 0.5);
    CHECK(r.contains({2.0, 1.0}));
    CHECK_FALSE(r.contains({2.0, 1.1}));
}

TEST_CASE("affine maps expose singular values and fixed points") {
    AffineMap flip = map1d(-0.5, 1.0);
    CHECK(flip.singular_values()[0] == 0.5);
    CHECK(flip.singular_values()[1] == 0.5);
    CHECK(flip.fixed_point()[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

    AffineMap rot = map2d({0.3, -0.4, 0.4, 0.3}, {0.0, 0.0});
    CHECK(rot.singular_values()[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rot.singular_values()[1] == doctest::Approx(0.5).epsilon(1e-12));

    AffineMap aniso = map2d({0.5, 0.0, 0.0, 0.25}, {0.0, 0.0});
    CHECK(aniso.singular_values()[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(aniso.singular_values()[1] == doctest::Approx(0.5).epsilon(1e-12));

    AffineMap corner = map2d({0.5, 0.0, 0.0, 0.5}, {0.25, std::sqrt(3.0) / 4.0});
    auto fp = corner.fixed_point();
    CHECK(fp[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fp[1] == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
    auto image = corner.apply(fp);
    CHECK(image[0] == doctest::Approx(fp[0]).epsilon(1e-15));
    CHECK(image[1] == doctest::Approx(fp[1]).epsilon(1e-15));
}

TEST_CASE("iterated systems validate their maps") {
    CHECK_THROWS_AS(AffineIFS(1, {map1d(1.0, 0.0)}), InputError);
    CHECK_THROWS_AS(AffineIFS(1, {map1d(0.0, 0.5)}), InputError);
    CHECK_THROWS_AS(AffineIFS(2, {map2d({0.5, 0.0, 0.0, 0.0}, {0.0, 0.0})}), InputError);
    CHECK_THROWS_AS(AffineIFS(3, {map1d(0.5, 0.0)}), InputError);
    CHECK_THROWS_AS(AffineIFS(1, {}), InputError);

    AffineMap wrong_dim = map1d(0.5, 0.0);
    wrong_dim.dimension = 2;
    CHECK_THROWS_AS(AffineIFS(1, {wrong_dim}), InputError);

    AffineIFS cantor = cantor_ifs();
    CHECK(cantor.map_count() == 2);
    CHECK(cantor.derived_contractions().lower(1) == doctest::Approx(1.0 / 3.0));
    CHECK(cantor.derived_contractions().upper(2) == doctest::Approx(1.0 / 3.0));
    CHECK_NOTHROW(cantor.check_matches(ContractionSystem({1.0 / 3.0, 1.0 / 3.0})));
    CHECK_THROWS_AS(cantor.check_matches(ContractionSystem({0.4, 1.0 / 3.0})), InputError);
}

TEST_CASE("bounding boxes absorb every map image") {
    AffineIFS cantor = cantor_ifs();
    Box q = cantor.bounding_box();
    CHECK(q.lo[0] <= 0.0);
    CHECK(q.hi[0] >= 1.0);
    for (int letter = 1; letter <= cantor.map_count(); ++letter) {
        Box image = map_image_hull(cantor.map(letter), q);
        CHECK(q.contains(image.lo, 1e-9));
        CHECK(q.contains(image.hi, 1e-9));
    }

    AffineIFS sier = sierpinski_ifs();
    Box t = sier.bounding_box();
    CHECK(t.contains({0.0, 0.0}, 1e-9));
    CHECK(t.contains({1.0, 0.0}, 1e-9));
    CHECK(t.contains({0.5, std::sqrt(3.0) / 2.0}, 1e-9));
    for (int letter = 1; letter <= sier.map_count(); ++letter) {
        Box image = map_image_hull(sier.map(letter), t);
        CHECK(t.contains(image.lo, 1e-9));
        CHECK(t.contains(image.hi, 1e-9));
    }
}

TEST_CASE("chaos game is deterministic and stays inside the forward images") {
    Presentation p = sft({Word{2, 2}}, 2);
    AffineIFS ifs = cantor_ifs();

    PointCloud a = attractor_points(p, ifs, 2000, 64, 9001);
    PointCloud b = attractor_points(p, ifs, 2000, 64, 9001);
    CHECK(a.coords == b.coords);
    CHECK(a.size() == 2000);

    PointCloud c = attractor_points(p, ifs, 2000, 64, 42);
    CHECK(a.coords != c.coords);

    Box q = ifs.bounding_box();
    std::vector<Box> images;
    for (int letter = 1; letter <= ifs.map_count(); ++letter)
        images.push_back(map_image_hull(ifs.map(letter), q));
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto x = a.point(i);
        bool inside = false;
        for (const Box& img : images)
            inside = inside || img.contains(x, 1e-9);
        CHECK(inside);
    }
}

TEST_CASE("forbidding a letter pair empties the corresponding subinterval") {
    Presentation p = sft({Word{2, 2}}, 2);
    PointCloud cloud = attractor_points(p, cantor_ifs(), 20000, 64, 5);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        double x = cloud.point(i)[0];
        bool in_gap = x > 7.0 / 9.0 + 1e-9 && x < 8.0 / 9.0 - 1e-9;
        CHECK_FALSE(in_gap);
        // The largest admissible address alternates letters, so nothing
        // lands beyond 3/4 either.
        CHECK(x <= 0.75 + 1e-9);
    }
}

TEST_CASE("a single map collapses the cloud onto its fixed point") {
    Presentation p = sft({}, 1);
    AffineIFS one(1, {map1d(0.5, 0.0)});
    PointCloud cloud = attractor_points(p, one, 100, 64, 3);
    for (std::size_t i = 0; i < cloud.size(); ++i)
        CHECK(std::abs(cloud.point(i)[0]) <= 1e-9);
}

TEST_CASE("chaos game validates its parameters") {
    Presentation p = sft({}, 2);
    AffineIFS ifs = cantor_ifs();
    CHECK_THROWS_AS(attractor_points(p, ifs, 100, 10, 1), InputError);
    CHECK_THROWS_AS(attractor_points(p, ifs, 200'000'000, 64, 1), ResourceError);
    CHECK_THROWS_AS(attractor_points(p, ifs, 100, 64, 1, std::nullopt,
                                     std::vector<double>{1.0}),
                    InputError);
    CHECK_THROWS_AS(attractor_points(p, ifs, 100, 64, 1, std::nullopt,
                                     std::vector<double>{1.0, 0.0}),
                    InputError);
    CHECK_THROWS_AS(attractor_points(p, ifs, 100, 64, 1, std::nullopt,
                                     std::vector<double>{1.0, -2.0}),
                    InputError);

    LabeledGraph stuck;
    stuck.vertex_count = 2;
    stuck.alphabet_size = 2;
    stuck.edges = {{0, 1, 1}};
    CHECK_THROWS_AS(attractor_points(Presentation(Alphabet(2), stuck), ifs, 100, 64, 1),
                    InputError);

    Presentation dead = sft({Word{1, 1}, Word{2, 1}, Word{2, 2}}, 2);
    CHECK_THROWS_AS(attractor_points(dead, ifs, 100, 64, 1), EmptyLanguageError);
}

TEST_CASE("letter weights bias the sampled letters") {
    Presentation p = sft({}, 2);
    AffineIFS ifs = cantor_ifs();

    PointCloud uniform = attractor_points(p, ifs, 2000, 64, 11);
    PointCloud biased = attractor_points(p, ifs, 2000, 64, 11, std::nullopt,
                                         std::vector<double>{1e6, 1.0});
    CHECK(uniform.coords != biased.coords);

    std::size_t low = 0;
    for (std::size_t i = 0; i < biased.size(); ++i)
        if (biased.point(i)[0] < 1.0 / 3.0 + 1e-9)
            ++low;
    CHECK(static_cast<double>(low) / static_cast<double>(biased.size()) > 0.9);
}

TEST_CASE("box counting recovers exact lattice dimensions") {
    // Dyadic scales on a dyadic lattice in [0, 1) occupy exactly 4^j cells,
    // so the fitted slope is an exact 2.
    std::vector<double> ladder;
    for (int j = 1; j <= 6; ++j)
        ladder.push_back(std::pow(2.0, -j));

    PointCloud grid;
    grid.dimension = 2;
    for (int i = 0; i < 256; ++i)
        for (int j = 0; j < 256; ++j)
            grid.push({static_cast<double>(i) / 256.0, static_cast<double>(j) / 256.0});
    BoxCountResult plane = box_count_dimension(grid, ladder);
    CHECK(plane.dimension == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(plane.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(plane.scales.size() == 6);
    for (int j = 1; j <= 6; ++j)
        CHECK(plane.scales[static_cast<std::size_t>(j - 1)].boxes ==
              static_cast<std::size_t>(1) << (2 * j));
    CHECK(plane.warnings.empty());

    PointCloud line;
    line.dimension = 1;
    for (int i = 0; i < 4096; ++i)
        line.push({static_cast<double>(i) / 4096.0, 0.0});
    BoxCountResult segment = box_count_dimension(line, ladder);
    CHECK(segment.dimension == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(segment.r_squared == doctest::Approx(1.0).epsilon(1e-12));

    // The dyadic-ladder overload anchors scales at the cloud extent; the
    // estimate stays close even though the grid no longer lines up.
    BoxCountResult rough = box_count_dimension(grid, 6);
    CHECK(rough.dimension > 1.8);
    CHECK(rough.dimension < 2.05);
    CHECK(rough.r_squared > 0.999);
}

TEST_CASE("box counting validates scales and warns on thin clouds") {
    PointCloud cloud;
    cloud.dimension = 1;
    for (int i = 0; i < 50; ++i)
        cloud.push({static_cast<double>(i) / 49.0, 0.0});

    CHECK_THROWS_AS(box_count_dimension(cloud, 3), InputError);
    CHECK_THROWS_AS(box_count_dimension(cloud, 41), InputError);
    CHECK_THROWS_AS(box_count_dimension(cloud, std::vector<double>{0.5, 0.25, 0.125}),
                    InputError);
    CHECK_THROWS_AS(
        box_count_dimension(cloud, std::vector<double>{0.5, 0.5, 0.25, 0.125}), InputError);
    CHECK_THROWS_AS(
        box_count_dimension(cloud, std::vector<double>{2.0, 0.5, 0.25, 0.125}), InputError);
    CHECK_THROWS_AS(
        box_count_dimension(cloud, std::vector<double>{0.5, 0.25, 0.125, 0.0}), InputError);
    CHECK_THROWS_AS(
        box_count_dimension(cloud, std::vector<double>{0.5, 0.25, 0.125, 1e-18}), InputError);

    BoxCountResult thin = box_count_dimension(cloud, 4);
    REQUIRE_FALSE(thin.warnings.empty());
    CHECK(thin.warnings[0].find("fewer than 1000") != std::string::npos);

    PointCloud empty;
    empty.dimension = 1;
    BoxCountResult nothing = box_count_dimension(empty, 4);
    CHECK(nothing.dimension == 0.0);
    REQUIRE_FALSE(nothing.warnings.empty());
    CHECK(nothing.warnings[0].find("empty") != std::string::npos);

    PointCloud dot;
    dot.dimension = 2;
    for (int i = 0; i < 5; ++i)
        dot.push({0.25, 0.75});
    BoxCountResult degenerate = box_count_dimension(dot, 4);
    CHECK(degenerate.dimension == 0.0);
    bool mentions_degenerate = false;
    for (const std::string& w : degenerate.warnings)
        mentions_degenerate = mentions_degenerate || w.find("coincide") != std::string::npos;
    CHECK(mentions_degenerate);
}

TEST_CASE("ternary ladder estimates the middle-third dimensions") {
    std::vector<double> ladder;
    for (int j = 2; j <= 7; ++j)
        ladder.push_back(std::pow(3.0, -j));

    PointCloud full_cloud = attractor_points(sft({}, 2), cantor_ifs(), 30000, 64, 1);
    BoxCountResult full = box_count_dimension(full_cloud, ladder);
    CHECK(std::abs(full.dimension - std::log(2.0) / std::log(3.0)) <= 0.05);

    PointCloud golden_cloud = attractor_points(sft({Word{2, 2}}, 2), cantor_ifs(), 30000, 64, 1);
    BoxCountResult golden = box_count_dimension(golden_cloud, ladder);
    double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    CHECK(std::abs(golden.dimension - std::log(phi) / std::log(3.0)) <= 0.05);
}

TEST_CASE("doubling the sample never shrinks a per-scale box count") {
    Presentation p = sft({Word{2, 2}}, 2);
    AffineIFS ifs = cantor_ifs();
    PointCloud small = attractor_points(p, ifs, 2000, 64, 7);
    PointCloud large = attractor_points(p, ifs, 4000, 64, 7);

    // Same seed: the smaller cloud is a prefix of the larger one.
    for (std::size_t i = 0; i < small.coords.size(); ++i)
        REQUIRE(small.coords[i] == large.coords[i]);

    std::vector<double> ladder;
    for (int j = 2; j <= 6; ++j)
        ladder.push_back(std::pow(3.0, -j));
    BoxCountResult a = box_count_dimension(small, ladder);
    BoxCountResult b = box_count_dimension(large, ladder);
    REQUIRE(a.scales.size() == b.scales.size());
    for (std::size_t i = 0; i < a.scales.size(); ++i)
        CHECK(b.scales[i].boxes >= a.scales[i].boxes);
}

TEST_CASE("density images use the binary grayscale format") {
    PointCloud cloud = attractor_points(sft({}, 3), sierpinski_ifs(), 5000, 64, 2);
    std::string path = "/tmp/subfractal_test_render.pgm";

    std::vector<std::string> warnings = render_pgm(cloud, 512, 512, path);
    CHECK(warnings.empty());
    std::string bytes = read_file(path);
    REQUIRE(bytes.size() == 15 + 512 * 512);
    CHECK(bytes.substr(0, 15) == "P5\n512 512\n255\n");

    render_pgm(cloud, 512, 512, path);
    CHECK(read_file(path) == bytes);

    PointCloud empty;
    empty.dimension = 2;
    std::string empty_path = "/tmp/subfractal_test_empty.pgm";
    warnings = render_pgm(empty, 16, 16, empty_path);
    REQUIRE_FALSE(warnings.empty());
    CHECK(warnings[0].find("empty") != std::string::npos);
    std::string blank = read_file(empty_path);
    REQUIRE(blank.size() > 12);
    for (std::size_t i = blank.find("255\n") + 4; i < blank.size(); ++i)
        CHECK(blank[i] == '\0');

    PointCloud strip;
    strip.dimension = 1;
    for (int i = 0; i < 3000; ++i)
        strip.push({static_cast<double>(i % 100) / 99.0, 0.0});
    std::string strip_path = "/tmp/subfractal_test_strip.pgm";
    render_pgm(strip, 64, 32, strip_path);
    std::string sbytes = read_file(strip_path);
    std::size_t off = sbytes.find("255\n") + 4;
    for (int col = 0; col < 64; col += 7)
        for (int row = 1; row < 32; ++row)
            CHECK(sbytes[off + static_cast<std::size_t>(row) * 64 +
                         static_cast<std::size_t>(col)] ==
                  sbytes[off + static_cast<std::size_t>(col)]);

    CHECK_THROWS_AS(render_pgm(cloud, 0, 32, path), InputError);
    CHECK_THROWS_AS(render_pgm(cloud, 32, 32, "/nonexistent_dir/x.pgm"), ResourceError);

    std::remove(path.c_str());
    std::remove(empty_path.c_str());
    std::remove(strip_path.c_str());
}

TEST_CASE("CSV output round-trips full-precision coordinates") {
    PointCloud cloud;
    cloud.dimension = 2;
    cloud.push({1.0 / 3.0, 0.1234567890123456789});
    cloud.push({-2.5, 1e-17});
    std::string path = "/tmp/subfractal_test_points.csv";
    write_csv(cloud, path);

    std::ifstream in(path);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "x,y");
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        std::string line;
        REQUIRE(std::getline(in, line));
        auto comma = line.find(',');
        REQUIRE(comma != std::string::npos);
        CHECK(std::stod(line.substr(0, comma)) == cloud.point(i)[0]);
        CHECK(std::stod(line.substr(comma + 1)) == cloud.point(i)[1]);
    }
    std::string extra;
    CHECK_FALSE(std::getline(in, extra));

    PointCloud flat;
    flat.dimension = 1;
    flat.push({0.5, 0.0});
    write_csv(flat, path);
    std::ifstream in1(path);
    std::getline(in1, header);
    CHECK(header == "x");

    CHECK_THROWS_AS(write_csv(cloud, "/nonexistent_dir/p.csv"), ResourceError);
    std::remove(path.c_str());
}
