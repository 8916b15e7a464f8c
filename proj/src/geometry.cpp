#include "netmorph/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "netmorph/errors.hpp"
#include "netmorph/rng.hpp"

namespace netmorph {

double AffineFunctional::operator()(std::span<const double> x) const {
    double v = r;
    for (size_t j = 0; j < p.size(); ++j) v += p[j] * x[j];
    return v;
}

Vec AffineMap::operator()(std::span<const double> x) const {
    Vec y(c);
    for (size_t i = 0; i < W.size(); ++i)
        for (size_t j = 0; j < W[i].size(); ++j) y[i] += W[i][j] * x[j];
    return y;
}

Normalization normalize(const Simplex& s) {
    const int D = s.dim();
    if (static_cast<int>(s.vertices.size()) != D + 1 || D < 1)
        throw input_error("simplex needs D+1 vertices in R^D");
    Mat V(D, D);
    for (int j = 0; j < D; ++j)
        for (int i = 0; i < D; ++i) V(i, j) = s.vertices[j + 1][i] - s.vertices[0][i];
    const double d = det(V);
    if (std::abs(d) <= kDegenerateDetTol)
        throw input_error("degenerate simplex: |det V| = " + std::to_string(std::abs(d)));
    Mat Vinv;
    if (!invert(V, Vinv, kDegenerateDetTol))
        throw input_error("degenerate simplex (singular V)");

    Normalization n;
    n.det = d;
    n.to_template.W.assign(D, Vec(D, 0.0));
    n.from_template.W.assign(D, Vec(D, 0.0));
    n.to_template.c.assign(D, 0.0);
    n.from_template.c = s.vertices[0];
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) {
            n.to_template.W[i][j] = Vinv(i, j);
            n.from_template.W[i][j] = V(i, j);
        }
    for (int i = 0; i < D; ++i) {
        double ci = 0.0;
        for (int j = 0; j < D; ++j) ci += Vinv(i, j) * s.vertices[0][j];
        n.to_template.c[i] = -ci;
    }
    return n;
}

double simplex_volume(const Simplex& s) {
    const int D = s.dim();
    Mat V(D, D);
    for (int j = 0; j < D; ++j)
        for (int i = 0; i < D; ++i) V(i, j) = s.vertices[j + 1][i] - s.vertices[0][i];
    double fact = 1.0;
    for (int k = 2; k <= D; ++k) fact *= k;
    return std::abs(det(V)) / fact;
}

std::vector<AffineFunctional> face_functionals(const Simplex& s) {
    const int D = s.dim();
    const Normalization n = normalize(s);
    std::vector<AffineFunctional> faces;
    faces.reserve(D + 1);
    for (int i = 0; i < D; ++i) {
        AffineFunctional f;
        f.p = n.to_template.W[i];
        f.r = n.to_template.c[i];
        faces.push_back(f);
    }
    AffineFunctional last;
    last.p.assign(D, 0.0);
    last.r = 1.0;
    for (int i = 0; i < D; ++i) {
        for (int j = 0; j < D; ++j) last.p[j] -= n.to_template.W[i][j];
        last.r -= n.to_template.c[i];
    }
    faces.push_back(last);
    for (auto& f : faces) {
        double m = 0.0;
        for (double v : f.p) m = std::max(m, std::abs(v));
        if (m <= 0.0) throw input_error("degenerate face functional");
        for (double& v : f.p) v /= m;
        f.r /= m;
    }
    return faces;
}

// --- documents ---------------------------------------------------------

using nlohmann::json;

std::string serialize_cover(const SimplicialCover& c) {
    json doc;
    doc["D"] = c.D;
    json pieces = json::array();
    for (const LinearPiece& p : c.pieces) {
        json jp;
        jp["vertices"] = p.simplex.vertices;
        jp["a"] = p.a;
        jp["b"] = p.b;
        pieces.push_back(jp);
    }
    doc["pieces"] = pieces;
    return doc.dump(2);
}

SimplicialCover deserialize_cover(const std::string& text) {
    try {
        const json doc = json::parse(text);
        SimplicialCover c;
        c.D = doc.at("D").get<int>();
        for (const json& jp : doc.at("pieces")) {
            LinearPiece p;
            p.simplex.vertices = jp.at("vertices").get<std::vector<Vec>>();
            p.a = jp.at("a").get<Vec>();
            p.b = jp.at("b").get<double>();
            if (p.simplex.dim() != c.D || static_cast<int>(p.a.size()) != c.D)
                throw parse_error("cover piece dimension mismatch");
            c.pieces.push_back(std::move(p));
        }
        return c;
    } catch (const json::exception& e) {
        throw parse_error(std::string("malformed cover document: ") + e.what());
    }
}

SimplicialCover load_cover(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return deserialize_cover(ss.str());
}

void save_cover(const SimplicialCover& c, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot open " + path + " for writing");
    out << serialize_cover(c) << "\n";
}

// --- 2D ----------------------------------------------------------------

double polygon_area(const Polygon2& poly) {
    double s = 0.0;
    const size_t n = poly.pts.size();
    for (size_t i = 0; i < n; ++i) {
        const auto& p = poly.pts[i];
        const auto& q = poly.pts[(i + 1) % n];
        s += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * std::abs(s);
}

Vec2 polygon_centroid(const Polygon2& poly) {
    double cx = 0.0, cy = 0.0;
    for (const auto& p : poly.pts) {
        cx += p[0];
        cy += p[1];
    }
    const double n = static_cast<double>(poly.pts.size());
    return {cx / n, cy / n};
}

Polygon2 clip_halfplane(const Polygon2& poly, double nx, double ny, double c) {
    Polygon2 out;
    const size_t n = poly.pts.size();
    if (n == 0) return out;
    auto side = [&](const Vec2& p) { return nx * p[0] + ny * p[1] + c; };
    for (size_t i = 0; i < n; ++i) {
        const Vec2& cur = poly.pts[i];
        const Vec2& nxt = poly.pts[(i + 1) % n];
        const double sc = side(cur), sn = side(nxt);
        if (sc >= 0.0) out.pts.push_back(cur);
        if ((sc < 0.0) != (sn < 0.0)) {
            const double t = sc / (sc - sn);
            out.pts.push_back(Vec2{cur[0] + t * (nxt[0] - cur[0]),
                                   cur[1] + t * (nxt[1] - cur[1])});
        }
    }
    return out;
}

namespace {

struct PatternAffine {
    std::vector<std::array<double, 3>> constraints;  // (nx, ny, c) that must be >= 0
    std::array<double, 3> out{};                     // output affine (a1, a2, b)
};

// Affine forms of every neuron under a fixed activation pattern.
PatternAffine pattern_affine(const Network& net, const std::vector<char>& pattern) {
    PatternAffine res;
    std::vector<std::array<double, 3>> post(net.neurons().size());
    size_t bit = 0;
    for (size_t i = 0; i < net.neurons().size(); ++i) {
        const Neuron& n = net.neurons()[i];
        std::array<double, 3> pre{0.0, 0.0, n.bias};
        for (const Term& t : n.incoming) {
            if (is_input_source(t.source)) {
                pre[input_coordinate(t.source)] += t.weight;
            } else {
                const auto& src = post[net.index_of(t.source)];
                for (int k = 0; k < 3; ++k) pre[k] += t.weight * src[k];
            }
        }
        if (n.activation == Activation::Relu) {
            const bool active = pattern[bit++] != 0;
            if (active) {
                res.constraints.push_back(pre);
                post[i] = pre;
            } else {
                res.constraints.push_back({-pre[0], -pre[1], -pre[2]});
                post[i] = {0.0, 0.0, 0.0};
            }
        } else {  // Identity
            post[i] = pre;
        }
    }
    res.out = {0.0, 0.0, net.output().bias};
    for (const Term& t : net.output().terms) {
        const auto& src = post[net.index_of(t.source)];
        for (int k = 0; k < 3; ++k) res.out[k] += t.weight * src[k];
    }
    return res;
}

}  // namespace

RegionEnumeration enumerate_regions_2d(const Network& net, double B, uint64_t seed,
                                       int samples) {
    if (net.input_dim() != 2)
        throw unsupported_error("enumerate_regions_2d: input_dim must be 2");
    size_t relu_count = 0;
    for (const Neuron& n : net.neurons()) {
        if (n.activation == Activation::BinaryStep)
            throw unsupported_error("enumerate_regions_2d: ReLU networks only");
        if (n.activation == Activation::Relu) relu_count++;
    }

    // Collect activation patterns at seeded sample points; the map keeps the
    // region order deterministic.
    std::map<std::vector<char>, int> patterns;
    CounterRng rng(seed);
    std::vector<double> scratch;
    const Evaluator& ev = net.evaluator();
    std::vector<double> x(2);
    for (int s = 0; s < samples; ++s) {
        x[0] = rng.uniform(-B, B);
        x[1] = rng.uniform(-B, B);
        (void)ev(x, scratch);
        std::vector<char> pat(relu_count);
        size_t bit = 0;
        for (size_t i = 0; i < net.neurons().size(); ++i) {
            if (net.neurons()[i].activation != Activation::Relu) continue;
            // scratch slot D+i holds the post-activation value; recompute the
            // sign from the preactivation instead.
            double pre = net.neurons()[i].bias;
            for (const Term& t : net.neurons()[i].incoming)
                pre += t.weight * (is_input_source(t.source)
                                       ? x[input_coordinate(t.source)]
                                       : scratch[2 + net.index_of(t.source)]);
            pat[bit++] = pre >= 0.0 ? 1 : 0;
        }
        patterns.emplace(std::move(pat), 0);
    }

    RegionEnumeration res;
    const double box_area = 4.0 * B * B;
    for (const auto& [pat, count] : patterns) {
        (void)count;
        const PatternAffine pa = pattern_affine(net, pat);
        Polygon2 cell;
        cell.pts = {{-B, -B}, {B, -B}, {B, B}, {-B, B}};
        for (const auto& c : pa.constraints) {
            if (c[0] == 0.0 && c[1] == 0.0) {
                if (c[2] < 0.0) {
                    cell.pts.clear();
                    break;
                }
                continue;
            }
            cell = clip_halfplane(cell, c[0], c[1], c[2]);
            if (cell.pts.size() < 3) break;
        }
        if (cell.pts.size() < 3) {
            res.dropped_cells++;
            continue;
        }
        const double area = polygon_area(cell);
        if (area < kCellAreaCutoff * box_area) {
            res.dropped_cells++;
            res.dropped_area += area;
            continue;
        }
        Region2 r;
        r.poly = std::move(cell);
        r.a = {pa.out[0], pa.out[1]};
        r.b = pa.out[2];
        res.regions.push_back(std::move(r));
    }
    return res;
}

std::vector<LinearPiece> triangulate(const Polygon2& poly, const Vec2& a, double b) {
    std::vector<LinearPiece> out;
    const size_t n = poly.pts.size();
    if (n < 3) return out;
    if (n == 3) {
        LinearPiece p;
        p.simplex.vertices = {{poly.pts[0][0], poly.pts[0][1]},
                              {poly.pts[1][0], poly.pts[1][1]},
                              {poly.pts[2][0], poly.pts[2][1]}};
        p.a = {a[0], a[1]};
        p.b = b;
        out.push_back(std::move(p));
        return out;
    }
    const Vec2 c = polygon_centroid(poly);
    for (size_t i = 0; i < n; ++i) {
        const Vec2& p0 = poly.pts[i];
        const Vec2& p1 = poly.pts[(i + 1) % n];
        const double area2 = std::abs((p0[0] - c[0]) * (p1[1] - c[1]) -
                                      (p1[0] - c[0]) * (p0[1] - c[1]));
        if (area2 <= 2.0 * kDegenerateDetTol) continue;
        LinearPiece p;
        p.simplex.vertices = {{c[0], c[1]}, {p0[0], p0[1]}, {p1[0], p1[1]}};
        p.a = {a[0], a[1]};
        p.b = b;
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace netmorph
