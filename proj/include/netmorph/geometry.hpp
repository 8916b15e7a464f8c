#ifndef NETMORPH_GEOMETRY_HPP
#define NETMORPH_GEOMETRY_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "netmorph/linalg.hpp"
#include "netmorph/network.hpp"

namespace netmorph {

using Vec = std::vector<double>;

constexpr double kDegenerateDetTol = 1e-10;
// Cells below this fraction of the box area are dropped during enumeration.
constexpr double kCellAreaCutoff = 1e-8;

// a^T x + r as a first-class object; the h_k functionals live here.
struct AffineFunctional {
    Vec p;
    double r = 0.0;
    double operator()(std::span<const double> x) const;
};

// D+1 vertices spanning R^D. Non-degenerate when |det V| > kDegenerateDetTol
// for V = (v1-v0, ..., vD-v0).
struct Simplex {
    std::vector<Vec> vertices;
    int dim() const { return vertices.empty() ? 0 : static_cast<int>(vertices[0].size()); }
};

struct AffineMap {
    std::vector<Vec> W;  // row-major D x D
    Vec c;
    Vec operator()(std::span<const double> x) const;
};

// T(p) = V^{-1}(p - v0) carries the simplex onto the template simplex
// (T(v0)=0, T(vi)=ei); `inverse` goes back. Throws input_error when
// |det V| <= kDegenerateDetTol.
struct Normalization {
    AffineMap to_template;
    AffineMap from_template;
    double det = 0.0;
};
Normalization normalize(const Simplex& s);

double simplex_volume(const Simplex& s);

// Face functionals of a simplex: D+1 affine forms, nonnegative exactly on
// the simplex, scaled to unit max-norm gradient. Face i is the image of the
// template face (x_i = 0 for i < D, 1 - sum x for i = D).
std::vector<AffineFunctional> face_functionals(const Simplex& s);

struct LinearPiece {
    Simplex simplex;
    Vec a;
    double b = 0.0;
};

struct SimplicialCover {
    int D = 0;
    std::vector<LinearPiece> pieces;
};

std::string serialize_cover(const SimplicialCover& c);
SimplicialCover deserialize_cover(const std::string& text);
SimplicialCover load_cover(const std::string& path);
void save_cover(const SimplicialCover& c, const std::string& path);

struct Hypercube {
    Vec lo, hi;
    int dim() const { return static_cast<int>(lo.size()); }
};

// --- 2D machinery -----------------------------------------------------

using Vec2 = std::array<double, 2>;

struct Polygon2 {
    std::vector<Vec2> pts;  // convex, counter-clockwise
};

double polygon_area(const Polygon2& poly);
Vec2 polygon_centroid(const Polygon2& poly);
// Keeps {x : nx*x + ny*y + c >= 0} (Sutherland-Hodgman against one plane).
Polygon2 clip_halfplane(const Polygon2& poly, double nx, double ny, double c);

struct Region2 {
    Polygon2 poly;
    Vec2 a{0.0, 0.0};
    double b = 0.0;
};

struct RegionEnumeration {
    std::vector<Region2> regions;
    int dropped_cells = 0;       // area below cutoff
    double dropped_area = 0.0;
};

// Linear regions of a 2D ReLU network over [-B,B]^2: activation patterns are
// collected by seeded sampling, deduplicated, and each pattern's cell is cut
// out of the square by half-plane clipping; (a, b) comes from the pattern's
// fixed affine form.
RegionEnumeration enumerate_regions_2d(const Network& net, double B, uint64_t seed,
                                       int samples = 100000);

// Fan triangulation from the centroid. Under 3 vertices gives an empty list.
std::vector<LinearPiece> triangulate(const Polygon2& poly, const Vec2& a, double b);

}  // namespace netmorph

#endif
