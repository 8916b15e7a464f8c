#include "netmorph/classify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "netmorph/errors.hpp"
#include "netmorph/fanshape.hpp"
#include "netmorph/pwl1d.hpp"

namespace netmorph {

namespace {

std::vector<Term> functional_terms(const AffineFunctional& f) {
    std::vector<Term> in;
    for (size_t j = 0; j < f.p.size(); ++j)
        if (f.p[j] != 0.0) in.push_back(Term{input_source(static_cast<int>(j)), f.p[j]});
    if (in.empty()) in.push_back(Term{input_source(0), 0.0});
    return in;
}

double sup_box(const AffineFunctional& f, double B) {
    double v = f.r;
    for (double p : f.p) v += std::abs(p) * B;
    return v;
}

Network constant_zero(int D) {
    NetworkBuilder b(D);
    b.set_output(0.0, {});
    return std::move(b).build();
}

// Appends the D+1 step neurons of one simplex block plus its threshold
// neuron; returns the threshold neuron id.
int append_step_wide_block(NetworkBuilder& b, const Simplex& s) {
    const int D = s.dim();
    const auto faces = face_functionals(s);
    std::vector<Term> sum;
    for (const auto& f : faces) {
        const int id = b.add_neuron(Activation::BinaryStep, f.r, functional_terms(f));
        sum.push_back(Term{id, 1.0});
    }
    return b.add_neuron(Activation::BinaryStep, -static_cast<double>(D + 1),
                        std::move(sum));
}

int append_step_deep_block(NetworkBuilder& b, const Simplex& s, double mu, double B) {
    const int D = s.dim();
    if (mu < 2.0) throw input_error("step deep block requires mu >= 2");
    const auto faces = face_functionals(s);
    // The lead payload is real-valued, so the first guard must dominate its
    // range over the box; later stages carry 0/1 values only.
    const double S = std::max(1.0, sup_box(faces[0], B));

    int chain = -1;
    for (int j = 1; j <= D; ++j) {
        AffineFunctional g;
        g.p = faces[j].p;
        g.r = faces[j].r;
        for (double& v : g.p) v = -v;
        g.r = -g.r;
        const int gid = b.add_neuron(Activation::BinaryStep, g.r, functional_terms(g));
        if (j == 1) {
            auto in = functional_terms(faces[0]);
            in.push_back(Term{gid, -mu * S});
            chain = b.add_neuron(Activation::BinaryStep, faces[0].r, std::move(in));
        } else {
            chain = b.add_neuron(Activation::BinaryStep, -0.5,
                                 {Term{chain, 1.0}, Term{gid, -mu_power(mu, j)}});
        }
    }
    return chain;
}

}  // namespace

Network build_step_wide_block(const Simplex& s) {
    NetworkBuilder b(s.dim());
    const int top = append_step_wide_block(b, s);
    b.set_output(0.0, {Term{top, 1.0}});
    return std::move(b).build();
}

Network build_step_wide(std::span<const Simplex> rules, int D) {
    if (rules.empty()) return constant_zero(D);
    NetworkBuilder b(D);
    std::vector<Term> sum;
    for (const Simplex& s : rules) {
        if (s.dim() != D) throw input_error("rule simplex dimension mismatch");
        sum.push_back(Term{append_step_wide_block(b, s), 1.0});
    }
    const int top = b.add_neuron(Activation::BinaryStep, -0.5, std::move(sum));
    b.set_output(0.0, {Term{top, 1.0}});
    return std::move(b).build();
}

double choose_step_mu(int D, double B, int K, double delta) {
    if (delta <= 0.0 || B <= 0.0 || K < 1)
        throw input_error("choose_step_mu: bad arguments");
    const double C = hyperplane_area_bound(D, B);
    const double bound = delta / (C * K);
    const double mu = 1.0 + 2.0 / bound;
    if (mu > kMuPowerCap)
        throw infeasible_error("choose_step_mu: delta below the mu cap",
                               delta * (mu / kMuPowerCap));
    return std::max(mu, 4.0);
}

Network build_step_deep_block(const Simplex& s, double mu, double B) {
    NetworkBuilder b(s.dim());
    const int top = append_step_deep_block(b, s, mu, B);
    b.set_output(0.0, {Term{top, 1.0}});
    return std::move(b).build();
}

Network build_step_deep(std::span<const Simplex> rules, int D, double mu, double B) {
    if (rules.empty()) return constant_zero(D);
    NetworkBuilder b(D);
    int acc = -1;
    for (const Simplex& s : rules) {
        if (s.dim() != D) throw input_error("rule simplex dimension mismatch");
        const int top = append_step_deep_block(b, s, mu, B);
        std::vector<Term> in{Term{top, 1.0}};
        if (acc >= 0) in.push_back(Term{acc, 1.0});
        acc = b.add_neuron(Activation::Identity, 0.0, std::move(in));
    }
    const int out = b.add_neuron(Activation::BinaryStep, -0.5, {Term{acc, 1.0}});
    b.set_output(0.0, {Term{out, 1.0}});
    return std::move(b).build();
}

// --- De Morgan ------------------------------------------------------------

namespace {

void validate_demorgan_rules(const RuleSystem& rs, double ramp) {
    if (ramp <= 0.0) throw input_error("ramp width must be positive");
    const int D = rs.D;
    for (const Rule& r : rs.rules) {
        if (r.kind != Rule::Kind::Box)
            throw input_error("De Morgan builders take hypercube rules");
        if (r.box.dim() != D || static_cast<int>(r.box.hi.size()) != D)
            throw input_error("rule dimension mismatch");
        for (int j = 0; j < D; ++j) {
            if (!(r.box.lo[j] < r.box.hi[j]))
                throw input_error("rule hypercube has empty extent");
            if (r.box.lo[j] < 0.0 || r.box.hi[j] > 1.0)
                throw input_error("De Morgan rules must lie inside the unit cube");
        }
    }
    for (size_t i = 0; i < rs.rules.size(); ++i)
        for (size_t k = i + 1; k < rs.rules.size(); ++k) {
            const auto& a = rs.rules[i].box;
            const auto& b = rs.rules[k].box;
            double sep = -1e300;
            for (int j = 0; j < D; ++j)
                sep = std::max(sep, std::max(a.lo[j] - b.hi[j], b.lo[j] - a.hi[j]));
            if (!(sep > 2.0 * ramp))
                throw input_error("rules " + std::to_string(i) + " and " +
                                  std::to_string(k) + " are closer than twice the ramp");
        }
}

// 2D+1 neurons: one relu per face ramp plus the plateau neuron
// relu(1 - sum relu((lo_j - x_j)/ramp) - sum relu((x_j - hi_j)/ramp)).
int append_trapezoid(NetworkBuilder& b, const Hypercube& box, double ramp) {
    const int D = box.dim();
    std::vector<Term> sum;
    for (int j = 0; j < D; ++j) {
        const int u = b.add_neuron(Activation::Relu, box.lo[j] / ramp,
                                   {Term{input_source(j), -1.0 / ramp}});
        const int v = b.add_neuron(Activation::Relu, -box.hi[j] / ramp,
                                   {Term{input_source(j), 1.0 / ramp}});
        sum.push_back(Term{u, -1.0});
        sum.push_back(Term{v, -1.0});
    }
    return b.add_neuron(Activation::Relu, 1.0, std::move(sum));
}

}  // namespace

ArchitecturePlan ArchitecturePlan::all_wide(int n) {
    ArchitecturePlan p;
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    if (n > 0) p.wide_groups.push_back(std::move(all));
    return p;
}

ArchitecturePlan ArchitecturePlan::all_deep(int n) {
    ArchitecturePlan p;
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    if (n > 0) p.deep_groups.push_back(std::move(all));
    return p;
}

Network build_mixed(const RuleSystem& rs, const ArchitecturePlan& plan, double ramp) {
    const int n = static_cast<int>(rs.rules.size());
    if (n == 0) return constant_zero(rs.D);
    validate_demorgan_rules(rs, ramp);

    std::vector<char> seen(n, 0);
    auto mark = [&](const std::vector<int>& g) {
        for (int i : g) {
            if (i < 0 || i >= n || seen[i])
                throw input_error("architecture plan does not partition the rules");
            seen[i] = 1;
        }
    };
    for (const auto& g : plan.wide_groups) mark(g);
    for (const auto& g : plan.deep_groups) mark(g);
    for (int i = 0; i < n; ++i)
        if (!seen[i]) throw input_error("architecture plan misses rule " + std::to_string(i));

    NetworkBuilder b(rs.D);
    std::vector<int> trap(n);
    for (int i = 0; i < n; ++i) trap[i] = append_trapezoid(b, rs.rules[i].box, ramp);

    double out_bias = 0.0;
    std::vector<Term> out;
    for (const auto& g : plan.deep_groups) {
        if (g.empty()) continue;
        int acc = -1;
        for (int i : g) {
            std::vector<Term> in{Term{trap[i], 1.0}};
            if (acc >= 0) in.push_back(Term{acc, 1.0});
            acc = b.add_neuron(Activation::Identity, 0.0, std::move(in));
        }
        out.push_back(Term{acc, 1.0});
    }
    for (const auto& g : plan.wide_groups) {
        if (g.empty()) continue;
        // not A_i = 1 - t_i; the group value is 1 - clamp(sum not A - (|g|-1))
        // = 1 - clamp(1 - sum t).
        std::vector<Term> arg;
        for (int i : g) arg.push_back(Term{trap[i], -1.0});
        std::vector<Term> arg2 = arg;
        const int s1 = b.add_neuron(Activation::Relu, 1.0, std::move(arg));
        const int s2 = b.add_neuron(Activation::Relu, 0.0, std::move(arg2));
        out_bias += 1.0;
        out.push_back(Term{s1, -1.0});
        out.push_back(Term{s2, 1.0});
    }
    b.set_output(out_bias, std::move(out));
    return std::move(b).build();
}

Network build_demorgan_deep(const RuleSystem& rs, double ramp) {
    return build_mixed(rs, ArchitecturePlan::all_deep(static_cast<int>(rs.rules.size())),
                       ramp);
}

Network build_demorgan_wide(const RuleSystem& rs, double ramp) {
    return build_mixed(rs, ArchitecturePlan::all_wide(static_cast<int>(rs.rules.size())),
                       ramp);
}

double default_ramp(const RuleSystem& rs, double eps) {
    if (eps <= 0.0) throw input_error("default_ramp: eps must be positive");
    const int n = static_cast<int>(rs.rules.size());
    if (n == 0) return 0.25 * eps;
    const int D = rs.D;

    const double exponent_bound = (1.0 - std::pow(eps / 2.0, 1.0 / n)) / 2.0;

    double min_side = 1e300, min_gap = 1e300;
    for (int i = 0; i < n; ++i) {
        const auto& a = rs.rules[i].box;
        for (int j = 0; j < D; ++j) min_side = std::min(min_side, a.hi[j] - a.lo[j]);
        for (int k = i + 1; k < n; ++k) {
            const auto& c = rs.rules[k].box;
            double sep = -1e300;
            for (int j = 0; j < D; ++j)
                sep = std::max(sep, std::max(a.lo[j] - c.hi[j], c.lo[j] - a.hi[j]));
            min_gap = std::min(min_gap, sep);
        }
    }
    // Total ramp-shell measure at ramp width d.
    auto shell = [&](double d) {
        double total = 0.0;
        for (const Rule& r : rs.rules) {
            double grow = 1.0, shrink = 1.0;
            for (int j = 0; j < D; ++j) {
                const double side = r.box.hi[j] - r.box.lo[j];
                grow *= side + 2.0 * d;
                shrink *= std::max(0.0, side - 2.0 * d);
            }
            total += grow - shrink;
        }
        return total;
    };
    double lo = 0.0, hi = min_side / 4.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (shell(mid) <= eps / 2.0)
            lo = mid;
        else
            hi = mid;
    }
    double d = std::min({exponent_bound, lo, min_side / 4.0});
    if (n > 1) d = std::min(d, min_gap / 4.0);
    if (d <= 0.0) throw input_error("default_ramp: rules leave no room for a ramp");
    return d;
}

// --- documents ------------------------------------------------------------

using nlohmann::json;

std::string serialize_rules(const RuleSystem& rs) {
    json doc;
    doc["D"] = rs.D;
    json rules = json::array();
    for (const Rule& r : rs.rules) {
        json jr;
        if (r.kind == Rule::Kind::Box) {
            jr["type"] = "hypercube";
            jr["lo"] = r.box.lo;
            jr["hi"] = r.box.hi;
        } else {
            jr["type"] = "simplex";
            jr["vertices"] = r.simplex.vertices;
        }
        rules.push_back(jr);
    }
    doc["rules"] = rules;
    return doc.dump(2);
}

RuleSystem deserialize_rules(const std::string& text) {
    try {
        const json doc = json::parse(text);
        RuleSystem rs;
        rs.D = doc.at("D").get<int>();
        for (const json& jr : doc.at("rules")) {
            Rule r;
            const std::string type = jr.at("type").get<std::string>();
            if (type == "hypercube") {
                r.kind = Rule::Kind::Box;
                r.box.lo = jr.at("lo").get<Vec>();
                r.box.hi = jr.at("hi").get<Vec>();
            } else if (type == "simplex") {
                r.kind = Rule::Kind::Simplex;
                r.simplex.vertices = jr.at("vertices").get<std::vector<Vec>>();
            } else {
                throw parse_error("unknown rule type \"" + type + "\"");
            }
            rs.rules.push_back(std::move(r));
        }
        return rs;
    } catch (const json::exception& e) {
        throw parse_error(std::string("malformed rule document: ") + e.what());
    }
}

RuleSystem load_rules(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return deserialize_rules(ss.str());
}

void save_rules(const RuleSystem& rs, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot open " + path + " for writing");
    out << serialize_rules(rs) << "\n";
}

// --- transform --------------------------------------------------------------

ClassifyResult classify_transform(const Network& net, TransformTask task, double delta,
                                  double B, uint64_t seed) {
    if (delta <= 0.0 || B <= 0.0)
        throw input_error("classify_transform: delta and B must be positive");

    std::vector<Simplex> label_one;
    const int D = net.input_dim();
    if (D == 1) {
        const PwlFunction1D f = extract_pwl(net, B);
        const auto values = f.knot_values();
        // Sign intervals of f; crossings become interval endpoints.
        std::vector<double> xs;
        std::vector<double> vs;
        for (size_t i = 0; i < f.breakpoints.size(); ++i) {
            xs.push_back(f.breakpoints[i]);
            vs.push_back(values[i]);
            if (i + 1 < f.breakpoints.size()) {
                const double v0 = values[i], v1 = values[i + 1];
                if ((v0 < 0) != (v1 < 0) && v0 != 0.0) {
                    const double t = v0 / (v0 - v1);
                    xs.push_back(f.breakpoints[i] + t * (f.breakpoints[i + 1] - f.breakpoints[i]));
                    vs.push_back(0.0);
                }
            }
        }
        size_t i = 0;
        while (i + 1 < xs.size()) {
            const double mid = 0.5 * (xs[i] + xs[i + 1]);
            if (f.evaluate(mid) >= 0.0) {
                size_t j = i;
                while (j + 1 < xs.size() && f.evaluate(0.5 * (xs[j] + xs[j + 1])) >= 0.0) j++;
                Simplex s;
                s.vertices = {{xs[i]}, {xs[j]}};
                label_one.push_back(std::move(s));
                i = j;
            } else {
                i++;
            }
        }
    } else if (D == 2) {
        const RegionEnumeration re = enumerate_regions_2d(net, B, seed);
        for (const Region2& r : re.regions) {
            Polygon2 pos = clip_halfplane(r.poly, r.a[0], r.a[1], r.b);
            if (polygon_area(pos) < kCellAreaCutoff * 4.0 * B * B) continue;
            for (const LinearPiece& t : triangulate(pos, r.a, r.b))
                label_one.push_back(t.simplex);
        }
    } else {
        throw unsupported_error(
            "classify_transform: label extraction covers D <= 2; use the step builders "
            "with an explicit simplex list otherwise");
    }

    ClassifyResult res{constant_zero(D), static_cast<int>(label_one.size()), 0.0};
    if (label_one.empty()) return res;
    if (task == TransformTask::Wide) {
        res.net = build_step_wide(label_one, D);
    } else {
        res.mu = choose_step_mu(D, B, static_cast<int>(label_one.size()), delta);
        res.net = build_step_deep(label_one, D, res.mu, B);
    }
    return res;
}

}  // namespace netmorph
