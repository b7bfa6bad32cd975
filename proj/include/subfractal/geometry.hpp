#ifndef SUBFRACTAL_GEOMETRY_HPP
#define SUBFRACTAL_GEOMETRY_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subfractal/contraction.hpp"
#include "subfractal/sofic.hpp"

namespace subfractal {

/// Axis-aligned box in dimension 1 or 2 (the second coordinate is unused
/// in dimension 1).
struct Box {
    int dimension = 1;
    std::array<double, 2> lo{0.0, 0.0};
    std::array<double, 2> hi{0.0, 0.0};

    double extent() const;
    std::array<double, 2> center() const;
    bool contains(const std::array<double, 2>& x, double slack = 0.0) const;
};

/// One affine contraction x -> L x + b with L stored row-major.
struct AffineMap {
    int dimension = 1;
    std::array<double, 4> linear{0.0, 0.0, 0.0, 0.0};
    std::array<double, 2> offset{0.0, 0.0};

    std::array<double, 2> apply(const std::array<double, 2>& x) const;
    /// Smallest and largest singular value of L.
    std::array<double, 2> singular_values() const;
    /// The unique solution of x = L x + b.
    std::array<double, 2> fixed_point() const;
};

/// Bounding box of the image of a box under an affine map (exact, via
/// the corner images).
Box map_image_hull(const AffineMap& map, const Box& box);

/// An iterated function system of affine contractions in dimension 1 or
/// 2, one map per alphabet letter. Construction derives per-map Lipschitz
/// bounds from singular values and rejects non-contractions.
class AffineIFS {
public:
    AffineIFS(int dimension, std::vector<AffineMap> maps);

    int dimension() const { return dimension_; }
    int map_count() const { return static_cast<int>(maps_.size()); }
    const AffineMap& map(int letter) const { return maps_[static_cast<std::size_t>(letter - 1)]; }

    /// Singular-value Lipschitz bounds, one pair per letter.
    const ContractionSystem& derived_contractions() const { return derived_; }
    /// Throws InputError when the supplied bounds disagree with the
    /// derived ones beyond `tol`.
    void check_matches(const ContractionSystem& c, double tol = 1e-9) const;

    /// A box Q with f_i(Q) inside Q for every map, grown from the map
    /// fixed points and padded slightly outward.
    Box bounding_box() const;

private:
    int dimension_;
    std::vector<AffineMap> maps_;
    ContractionSystem derived_;
};

struct PointCloud {
    int dimension = 1;
    std::vector<double> coords; // dimension entries per point

    std::size_t size() const { return coords.size() / static_cast<std::size_t>(dimension); }
    std::array<double, 2> point(std::size_t i) const;
    void push(const std::array<double, 2>& x);
};

inline constexpr int default_burn_in = 64;
inline constexpr int min_burn_in = 30;

/// Sample the subfractal by a chaos game on the presentation's graph:
/// follow a random out-edge, apply that letter's map to the running
/// point, and record the point once the burn-in has passed. The walk
/// starts in a source component so reducible systems are covered. The
/// seed point defaults to the center of the derived bounding box.
/// Out-edges are drawn uniformly unless `letter_weights` (one positive
/// weight per letter) biases the draw, e.g. toward equilibrium sampling.
PointCloud attractor_points(const Presentation& p, const AffineIFS& ifs, std::size_t count,
                            int burn_in = default_burn_in, std::uint64_t seed = 1,
                            std::optional<std::array<double, 2>> start = std::nullopt,
                            std::optional<std::vector<double>> letter_weights = std::nullopt);

struct ScaleCount {
    double r = 0.0;
    std::size_t boxes = 0;
};

struct BoxCountResult {
    double dimension = 0.0;
    double r_squared = 0.0;
    std::vector<ScaleCount> scales;
    std::vector<std::string> warnings;
};

inline constexpr int min_box_scales = 4;
inline constexpr int max_box_scales = 40;

/// Box-counting estimate: occupied grid cells (anchored at the cloud's
/// bounding-box corner) at the given box sizes, then the least-squares
/// slope of log(count) against log(1/r). With six or more scales the
/// coarsest and finest are dropped from the fit. Clouds below a thousand
/// points get a reliability warning; empty or single-point clouds
/// estimate 0. Scales must be distinct, positive, and no larger than the
/// cloud's bounding-box size.
BoxCountResult box_count_dimension(const PointCloud& cloud, const std::vector<double>& scales);

/// Same estimate on the dyadic ladder extent/2^j, j = 1..num_scales.
BoxCountResult box_count_dimension(const PointCloud& cloud, int num_scales = 8);

/// Write the cloud as a binary PGM density image (max-normalized). A
/// one-dimensional cloud renders as a density strip. Returns warnings
/// (an empty cloud still writes an all-zero image).
std::vector<std::string> render_pgm(const PointCloud& cloud, int width, int height,
                                    const std::string& path);

/// Write the cloud as CSV with header x[,y] and full-precision values.
void write_csv(const PointCloud& cloud, const std::string& path);

} // namespace subfractal

#endif
