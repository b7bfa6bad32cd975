#include "subfractal/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <unordered_set>

#include "subfractal/errors.hpp"
#include "subfractal/spectral.hpp"

namespace subfractal {

double Box::extent() const {
    double e = hi[0] - lo[0];
    if (dimension == 2)
        e = std::max(e, hi[1] - lo[1]);
    return e;
}

std::array<double, 2> Box::center() const {
    return {0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])};
}

bool Box::contains(const std::array<double, 2>& x, double slack) const {
    for (int d = 0; d < dimension; ++d) {
        std::size_t i = static_cast<std::size_t>(d);
        if (x[i] < lo[i] - slack || x[i] > hi[i] + slack)
            return false;
    }
    return true;
}

std::array<double, 2> AffineMap::apply(const std::array<double, 2>& x) const {
    if (dimension == 1)
        return {linear[0] * x[0] + offset[0], 0.0};
    return {linear[0] * x[0] + linear[1] * x[1] + offset[0],
            linear[2] * x[0] + linear[3] * x[1] + offset[1]};
}

std::array<double, 2> AffineMap::singular_values() const {
    if (dimension == 1) {
        double s = std::abs(linear[0]);
        return {s, s};
    }
    double a = linear[0], b = linear[1], c = linear[2], d = linear[3];
    double det = a * d - b * c;
    double trace = a * a + b * b + c * c + d * d;
    double disc = std::sqrt(std::max(0.0, trace * trace - 4.0 * det * det));
    double smax = std::sqrt(0.5 * (trace + disc));
    double smin = smax > 0.0 ? std::abs(det) / smax : 0.0;
    return {smin, smax};
}

std::array<double, 2> AffineMap::fixed_point() const {
    if (dimension == 1)
        return {offset[0] / (1.0 - linear[0]), 0.0};
    double a = 1.0 - linear[0], b = -linear[1];
    double c = -linear[2], d = 1.0 - linear[3];
    double det = a * d - b * c;
    return {(d * offset[0] - b * offset[1]) / det, (a * offset[1] - c * offset[0]) / det};
}

namespace {

ContractionSystem derive_contractions(int dimension, const std::vector<AffineMap>& maps) {
    std::vector<double> lower, upper;
    for (std::size_t i = 0; i < maps.size(); ++i) {
        if (maps[i].dimension != dimension)
            throw InputError("map " + std::to_string(i + 1) + " has dimension " +
                             std::to_string(maps[i].dimension) + ", expected " +
                             std::to_string(dimension));
        auto [smin, smax] = maps[i].singular_values();
        if (smax >= 1.0)
            throw InputError("map " + std::to_string(i + 1) +
                             " is not a contraction (largest singular value " +
                             std::to_string(smax) + ")");
        if (smin <= 0.0)
            throw InputError("map " + std::to_string(i + 1) +
                             " is singular; its lower Lipschitz bound would be 0");
        lower.push_back(smin);
        upper.push_back(smax);
    }
    return ContractionSystem(std::move(lower), std::move(upper));
}

} // namespace

AffineIFS::AffineIFS(int dimension, std::vector<AffineMap> maps)
    : dimension_(dimension), maps_(std::move(maps)), derived_(derive_contractions(dimension, maps_)) {
    if (dimension != 1 && dimension != 2)
        throw InputError("only dimensions 1 and 2 are supported, got " + std::to_string(dimension));
    if (maps_.empty())
        throw InputError("an iterated function system needs at least one map");
}

void AffineIFS::check_matches(const ContractionSystem& c, double tol) const {
    if (c.alphabet_size() != map_count())
        throw InputError("contraction bounds cover " + std::to_string(c.alphabet_size()) +
                         " letters but the system has " + std::to_string(map_count()) + " maps");
    for (int letter = 1; letter <= map_count(); ++letter) {
        double dl = std::abs(c.lower(letter) - derived_.lower(letter));
        double du = std::abs(c.upper(letter) - derived_.upper(letter));
        if (dl > tol || du > tol)
            throw InputError("declared contraction bounds for letter " + std::to_string(letter) +
                             " differ from the map's singular values by more than " +
                             std::to_string(tol));
    }
}

Box map_image_hull(const AffineMap& map, const Box& box) {
    Box out;
    out.dimension = box.dimension;
    out.lo = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    out.hi = {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    std::vector<std::array<double, 2>> corners;
    if (box.dimension == 1) {
        corners = {{box.lo[0], 0.0}, {box.hi[0], 0.0}};
    } else {
        corners = {{box.lo[0], box.lo[1]},
                   {box.lo[0], box.hi[1]},
                   {box.hi[0], box.lo[1]},
                   {box.hi[0], box.hi[1]}};
    }
    for (const auto& corner : corners) {
        auto y = map.apply(corner);
        for (int d = 0; d < box.dimension; ++d) {
            std::size_t i = static_cast<std::size_t>(d);
            out.lo[i] = std::min(out.lo[i], y[i]);
            out.hi[i] = std::max(out.hi[i], y[i]);
        }
    }
    return out;
}

Box AffineIFS::bounding_box() const {
    Box box;
    box.dimension = dimension_;
    box.lo = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    box.hi = {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const AffineMap& m : maps_) {
        auto fp = m.fixed_point();
        for (int d = 0; d < dimension_; ++d) {
            std::size_t i = static_cast<std::size_t>(d);
            box.lo[i] = std::min(box.lo[i], fp[i]);
            box.hi[i] = std::max(box.hi[i], fp[i]);
        }
    }

    for (int iter = 0; iter < 256; ++iter) {
        Box next = box;
        for (const AffineMap& m : maps_) {
            Box image = map_image_hull(m, box);
            for (int d = 0; d < dimension_; ++d) {
                std::size_t i = static_cast<std::size_t>(d);
                next.lo[i] = std::min(next.lo[i], image.lo[i]);
                next.hi[i] = std::max(next.hi[i], image.hi[i]);
            }
        }
        double growth = 0.0;
        for (int d = 0; d < dimension_; ++d) {
            std::size_t i = static_cast<std::size_t>(d);
            growth = std::max(growth, box.lo[i] - next.lo[i]);
            growth = std::max(growth, next.hi[i] - box.hi[i]);
        }
        box = next;
        if (growth <= 1e-12 * (1.0 + box.extent()))
            break;
    }

    double pad = 1e-9 * (1.0 + box.extent());
    for (int d = 0; d < dimension_; ++d) {
        std::size_t i = static_cast<std::size_t>(d);
        box.lo[i] -= pad;
        box.hi[i] += pad;
    }
    return box;
}

std::array<double, 2> PointCloud::point(std::size_t i) const {
    if (dimension == 1)
        return {coords[i], 0.0};
    return {coords[2 * i], coords[2 * i + 1]};
}

void PointCloud::push(const std::array<double, 2>& x) {
    coords.push_back(x[0]);
    if (dimension == 2)
        coords.push_back(x[1]);
}

namespace {

constexpr std::size_t max_point_count = 100'000'000;

// Unbiased uniform draw from {0, ..., n-1}; the modulo remainder region
// at the top of the generator's range is rejected and redrawn.
std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
    if (n == 1)
        return 0;
    std::uint64_t limit = (std::numeric_limits<std::uint64_t>::max() / n) * n;
    std::uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return static_cast<std::size_t>(r % n);
}

} // namespace

PointCloud attractor_points(const Presentation& p, const AffineIFS& ifs, std::size_t count,
                            int burn_in, std::uint64_t seed,
                            std::optional<std::array<double, 2>> start,
                            std::optional<std::vector<double>> letter_weights) {
    if (ifs.map_count() != p.alphabet().size)
        throw InputError("the system has " + std::to_string(ifs.map_count()) + " maps but the "
                         "alphabet has " + std::to_string(p.alphabet().size) + " letters");
    if (burn_in < min_burn_in)
        throw InputError("burn-in must be at least " + std::to_string(min_burn_in) + " steps");
    if (count > max_point_count)
        throw ResourceError("point count " + std::to_string(count) + " exceeds the cap of " +
                            std::to_string(max_point_count));
    if (letter_weights) {
        if (letter_weights->size() != static_cast<std::size_t>(p.alphabet().size))
            throw InputError("letter weights must list one weight per letter");
        for (double w : *letter_weights)
            if (!(w > 0.0) || !std::isfinite(w))
                throw InputError("letter weights must be positive finite numbers");
    }

    LabeledGraph g = p.is_sft() ? live_restriction(p.graph()) : p.graph();
    if (g.vertex_count == 0)
        throw EmptyLanguageError("the subshift language is empty; there is nothing to sample");
    auto out_lists = g.out_edge_lists();
    for (int v = 0; v < g.vertex_count; ++v)
        if (out_lists[static_cast<std::size_t>(v)].empty())
            throw InputError("vertex " + g.vertex_name(v) + " has no outgoing edges; a sampling "
                             "presentation must allow every walk to continue");

    // Starting in a source component of the condensation lets the walk
    // reach every downstream component, so reducible systems still get
    // sampled across all their pieces.
    SccDecomposition scc = scc_decompose(g.adjacency());
    int vertex = scc.components.back().front();

    std::mt19937_64 rng(seed);
    std::array<double, 2> x = start ? *start : ifs.bounding_box().center();

    PointCloud cloud;
    cloud.dimension = ifs.dimension();
    cloud.coords.reserve(count * static_cast<std::size_t>(ifs.dimension()));
    std::size_t total = count + static_cast<std::size_t>(burn_in);
    for (std::size_t step = 0; step < total; ++step) {
        const auto& out = out_lists[static_cast<std::size_t>(vertex)];
        std::size_t pick;
        if (!letter_weights) {
            pick = uniform_index(rng, out.size());
        } else {
            double total_weight = 0.0;
            for (int edge : out)
                total_weight +=
                    (*letter_weights)[static_cast<std::size_t>(g.edges[static_cast<std::size_t>(edge)].label - 1)];
            // 53-bit mantissa draw in [0, 1), scaled to the weight mass
            double r = static_cast<double>(rng() >> 11) * 0x1p-53 * total_weight;
            pick = 0;
            for (; pick + 1 < out.size(); ++pick) {
                r -= (*letter_weights)[static_cast<std::size_t>(
                    g.edges[static_cast<std::size_t>(out[pick])].label - 1)];
                if (r < 0.0)
                    break;
            }
        }
        const LabeledEdge& e = g.edges[static_cast<std::size_t>(out[pick])];
        x = ifs.map(e.label).apply(x);
        vertex = e.to;
        if (step >= static_cast<std::size_t>(burn_in))
            cloud.push(x);
    }
    return cloud;
}

namespace {

struct CloudBounds {
    std::array<double, 2> lo{0.0, 0.0};
    std::array<double, 2> hi{0.0, 0.0};
};

CloudBounds cloud_bounds(const PointCloud& cloud) {
    CloudBounds b;
    b.lo = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    b.hi = {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        auto x = cloud.point(i);
        for (int d = 0; d < cloud.dimension; ++d) {
            std::size_t j = static_cast<std::size_t>(d);
            b.lo[j] = std::min(b.lo[j], x[j]);
            b.hi[j] = std::max(b.hi[j], x[j]);
        }
    }
    return b;
}

} // namespace

namespace {

void check_scale_count(std::size_t count) {
    if (count < static_cast<std::size_t>(min_box_scales))
        throw InputError("box counting needs at least " + std::to_string(min_box_scales) +
                         " scales");
    if (count > static_cast<std::size_t>(max_box_scales))
        throw InputError("box counting supports at most " + std::to_string(max_box_scales) +
                         " scales; smaller cells would drown in rounding error");
}

// Fills warnings and returns false when there is nothing to count.
bool countable_cloud(const PointCloud& cloud, BoxCountResult& result, CloudBounds& b,
                     double& extent) {
    if (cloud.size() == 0) {
        result.warnings.push_back("empty point cloud; the estimate defaults to 0");
        return false;
    }
    if (cloud.size() < 1000)
        result.warnings.push_back("fewer than 1000 points; the fit may be unreliable");
    b = cloud_bounds(cloud);
    extent = b.hi[0] - b.lo[0];
    if (cloud.dimension == 2)
        extent = std::max(extent, b.hi[1] - b.lo[1]);
    if (extent <= 0.0) {
        result.warnings.push_back("degenerate point cloud: all points coincide; the estimate "
                                  "defaults to 0");
        return false;
    }
    return true;
}

void count_occupied(const PointCloud& cloud, const CloudBounds& b,
                    const std::vector<double>& scales, BoxCountResult& result) {
    for (double r : scales) {
        std::unordered_set<std::uint64_t> occupied;
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            auto x = cloud.point(i);
            std::uint64_t key = 0;
            for (int d = 0; d < cloud.dimension; ++d) {
                std::size_t jj = static_cast<std::size_t>(d);
                double idx = std::max(std::floor((x[jj] - b.lo[jj]) / r), 0.0);
                key = (key << 32) | static_cast<std::uint64_t>(idx);
            }
            occupied.insert(key);
        }
        result.scales.push_back({r, occupied.size()});
    }
}

// Least-squares slope of log(count) against log(1/r); with six or more
// scales the coarsest and finest are left out of the fit.
void fit_dimension(BoxCountResult& result) {
    std::size_t first = 0;
    std::size_t last = result.scales.size();
    if (result.scales.size() >= 6) {
        ++first;
        --last;
    }

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    double n = static_cast<double>(last - first);
    for (std::size_t i = first; i < last; ++i) {
        double xv = -std::log(result.scales[i].r);
        double yv = std::log(static_cast<double>(result.scales[i].boxes));
        sx += xv;
        sy += yv;
        sxx += xv * xv;
        sxy += xv * yv;
        syy += yv * yv;
    }
    double denom = n * sxx - sx * sx;
    result.dimension = (n * sxy - sx * sy) / denom;

    double ss_tot = syy - sy * sy / n;
    double intercept = (sy - result.dimension * sx) / n;
    double ss_res = 0.0;
    for (std::size_t i = first; i < last; ++i) {
        double xv = -std::log(result.scales[i].r);
        double yv = std::log(static_cast<double>(result.scales[i].boxes));
        double e = yv - (result.dimension * xv + intercept);
        ss_res += e * e;
    }
    result.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
}

} // namespace

BoxCountResult box_count_dimension(const PointCloud& cloud, const std::vector<double>& scales) {
    check_scale_count(scales.size());

    BoxCountResult result;
    CloudBounds b;
    double extent = 0.0;
    if (!countable_cloud(cloud, result, b, extent))
        return result;

    std::vector<double> rs = scales;
    std::sort(rs.begin(), rs.end(), std::greater<>());
    // Grid cells are indexed in 32 bits per axis, so a scale may not slice
    // the cloud into more than 2^31 cells along any axis.
    double finest = std::max(10.0 * std::numeric_limits<double>::epsilon(), 0x1p-31) * extent;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        if (!std::isfinite(rs[i]) || rs[i] <= 0.0)
            throw InputError("box-counting scales must be positive finite numbers");
        if (i > 0 && rs[i] == rs[i - 1])
            throw InputError("box-counting scales must be distinct");
        if (rs[i] > extent * (1.0 + 1e-12))
            throw InputError("box-counting scale exceeds the cloud's bounding-box size");
        if (rs[i] < finest)
            throw InputError("box-counting scale is too fine for the cloud's bounding box");
    }

    count_occupied(cloud, b, rs, result);
    fit_dimension(result);
    return result;
}

BoxCountResult box_count_dimension(const PointCloud& cloud, int num_scales) {
    check_scale_count(num_scales < 0 ? 0 : static_cast<std::size_t>(num_scales));

    BoxCountResult result;
    CloudBounds b;
    double extent = 0.0;
    if (!countable_cloud(cloud, result, b, extent))
        return result;

    std::vector<double> rs;
    for (int j = 1; j <= num_scales; ++j)
        rs.push_back(extent / std::pow(2.0, j));

    count_occupied(cloud, b, rs, result);
    fit_dimension(result);
    return result;
}

std::vector<std::string> render_pgm(const PointCloud& cloud, int width, int height,
                                    const std::string& path) {
    if (width < 1 || height < 1 || width > 20000 || height > 20000)
        throw InputError("image size must be between 1x1 and 20000x20000");

    std::vector<std::string> warnings;
    if (cloud.size() == 0)
        warnings.push_back("empty point cloud; writing an all-zero image");

    std::vector<std::uint64_t> counts(static_cast<std::size_t>(width) *
                                      static_cast<std::size_t>(height));
    if (cloud.size() > 0) {
        CloudBounds b = cloud_bounds(cloud);
        double wx = b.hi[0] - b.lo[0];
        double wy = cloud.dimension == 2 ? b.hi[1] - b.lo[1] : 0.0;
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            auto p = cloud.point(i);
            int px = wx > 0.0 ? static_cast<int>((p[0] - b.lo[0]) / wx * width) : 0;
            px = std::clamp(px, 0, width - 1);
            int py = 0;
            if (cloud.dimension == 2) {
                py = wy > 0.0 ? static_cast<int>((p[1] - b.lo[1]) / wy * height) : 0;
                py = std::clamp(py, 0, height - 1);
                py = height - 1 - py;
            }
            if (cloud.dimension == 1) {
                // density strip: smear the column over every row
                for (int row = 0; row < height; ++row)
                    ++counts[static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
                             static_cast<std::size_t>(px)];
            } else {
                ++counts[static_cast<std::size_t>(py) * static_cast<std::size_t>(width) +
                         static_cast<std::size_t>(px)];
            }
        }
    }

    std::uint64_t peak = 0;
    for (std::uint64_t v : counts)
        peak = std::max(peak, v);

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ResourceError("could not open " + path + " for writing");
    out << "P5\n" << width << " " << height << "\n255\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(width));
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            std::uint64_t v = counts[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                                     static_cast<std::size_t>(x)];
            row[static_cast<std::size_t>(x)] =
                peak == 0 ? 0
                          : static_cast<unsigned char>(
                                std::lround(255.0 * static_cast<double>(v) /
                                            static_cast<double>(peak)));
        }
        out.write(reinterpret_cast<const char*>(row.data()), width);
    }
    if (!out)
        throw ResourceError("failed while writing " + path);
    return warnings;
}

void write_csv(const PointCloud& cloud, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw ResourceError("could not open " + path + " for writing");
    out << (cloud.dimension == 2 ? "x,y\n" : "x\n");
    char buf[64];
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        auto p = cloud.point(i);
        std::snprintf(buf, sizeof(buf), "%.17g", p[0]);
        out << buf;
        if (cloud.dimension == 2) {
            std::snprintf(buf, sizeof(buf), "%.17g", p[1]);
            out << ',' << buf;
        }
        out << '\n';
    }
    if (!out)
        throw ResourceError("failed while writing " + path);
}

} // namespace subfractal
