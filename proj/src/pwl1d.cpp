#include "netmorph/pwl1d.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "netmorph/errors.hpp"

namespace netmorph {

void PwlFunction1D::validate() const {
    if (B <= 0.0) throw input_error("pwl: B must be positive");
    if (breakpoints.size() < 2 || slopes.size() + 1 != breakpoints.size())
        throw input_error("pwl: breakpoint/slope count mismatch");
    for (size_t i = 0; i + 1 < breakpoints.size(); ++i)
        if (!(breakpoints[i] < breakpoints[i + 1]))
            throw input_error("pwl: breakpoints not strictly increasing");
    for (size_t i = 0; i + 1 < slopes.size(); ++i)
        if (std::abs(slopes[i + 1] - slopes[i]) <= kSlopeMergeTol)
            throw input_error("pwl: neighboring pieces share a slope; fuse them first");
}

std::vector<double> PwlFunction1D::knot_values() const {
    std::vector<double> v(breakpoints.size());
    v[0] = anchor;
    for (size_t i = 0; i + 1 < breakpoints.size(); ++i)
        v[i + 1] = v[i] + slopes[i] * (breakpoints[i + 1] - breakpoints[i]);
    return v;
}

double PwlFunction1D::evaluate(double x) const {
    const auto v = knot_values();
    if (x <= breakpoints.front()) return v.front() + slopes.front() * (x - breakpoints.front());
    if (x >= breakpoints.back()) return v.back() + slopes.back() * (x - breakpoints.back());
    const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
    const size_t i = static_cast<size_t>(it - breakpoints.begin()) - 1;
    return v[i] + slopes[i] * (x - breakpoints[i]);
}

namespace {

// Working form during extraction: knot positions plus values there.
struct Curve {
    std::vector<double> xs;
    std::vector<double> vs;

    double value_at(double x) const {
        if (x <= xs.front()) return vs.front();
        if (x >= xs.back()) return vs.back();
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        const size_t i = static_cast<size_t>(it - xs.begin()) - 1;
        const double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
        return vs[i] + t * (vs[i + 1] - vs[i]);
    }
};

Curve constant_curve(double B, double c) { return Curve{{-B, B}, {c, c}}; }

Curve identity_curve(double B) { return Curve{{-B, B}, {-B, B}}; }

// dst += w * src over the union of knot sets.
Curve axpy(const Curve& acc, double w, const Curve& src) {
    Curve out;
    out.xs.reserve(acc.xs.size() + src.xs.size());
    std::merge(acc.xs.begin(), acc.xs.end(), src.xs.begin(), src.xs.end(),
               std::back_inserter(out.xs));
    out.xs.erase(std::unique(out.xs.begin(), out.xs.end()), out.xs.end());
    out.vs.resize(out.xs.size());
    for (size_t i = 0; i < out.xs.size(); ++i)
        out.vs[i] = acc.value_at(out.xs[i]) + w * src.value_at(out.xs[i]);
    return out;
}

Curve relu_curve(const Curve& c) {
    Curve out;
    const double span = c.xs.back() - c.xs.front();
    for (size_t i = 0; i < c.xs.size(); ++i) {
        if (i > 0) {
            const double v0 = c.vs[i - 1], v1 = c.vs[i];
            if ((v0 < 0.0 && v1 > 0.0) || (v0 > 0.0 && v1 < 0.0)) {
                const double t = v0 / (v0 - v1);
                const double xz = c.xs[i - 1] + t * (c.xs[i] - c.xs[i - 1]);
                if (xz - out.xs.back() > 1e-14 * span && c.xs[i] - xz > 1e-14 * span) {
                    out.xs.push_back(xz);
                    out.vs.push_back(0.0);
                }
            }
        }
        out.xs.push_back(c.xs[i]);
        out.vs.push_back(std::max(0.0, c.vs[i]));
    }
    return out;
}

}  // namespace

PwlFunction1D extract_pwl(const Network& net, double B) {
    if (B <= 0.0) throw input_error("extract_pwl: B must be positive");
    if (net.input_dim() != 1) throw unsupported_error("extract_pwl: univariate networks only");

    std::vector<Curve> curves;
    curves.reserve(net.neurons().size());
    const Curve x = identity_curve(B);
    for (const Neuron& n : net.neurons()) {
        if (n.activation == Activation::BinaryStep)
            throw unsupported_error("extract_pwl: binary-step activation is not piecewise linear");
        Curve pre = constant_curve(B, n.bias);
        for (const Term& t : n.incoming)
            pre = axpy(pre, t.weight, is_input_source(t.source) ? x : curves[net.index_of(t.source)]);
        curves.push_back(n.activation == Activation::Relu ? relu_curve(pre) : pre);
    }
    Curve out = constant_curve(B, net.output().bias);
    for (const Term& t : net.output().terms)
        out = axpy(out, t.weight, curves[net.index_of(t.source)]);

    // Knots to pieces, fusing equal-slope neighbors.
    PwlFunction1D f;
    f.B = B;
    f.anchor = out.vs.front();
    f.breakpoints.push_back(out.xs.front());
    double prev_slope = 0.0;
    bool have_piece = false;
    for (size_t i = 0; i + 1 < out.xs.size(); ++i) {
        const double dx = out.xs[i + 1] - out.xs[i];
        if (dx <= 1e-13 * 2.0 * B) continue;  // fp-level knot duplicates
        const double w = (out.vs[i + 1] - out.vs[i]) / dx;
        if (have_piece && std::abs(w - prev_slope) <= kSlopeMergeTol) {
            f.breakpoints.back() = out.xs[i + 1];
            continue;
        }
        f.breakpoints.push_back(out.xs[i + 1]);
        f.slopes.push_back(w);
        prev_slope = w;
        have_piece = true;
    }
    if (f.slopes.empty()) {  // constant network
        f.breakpoints = {-B, B};
        f.slopes = {0.0};
    }
    return f;
}

Network build_wide(const PwlFunction1D& f) {
    f.validate();
    NetworkBuilder b(1);
    std::vector<Term> out;
    double prev_w = 0.0;
    for (int i = 0; i < f.piece_count(); ++i) {
        const int id = b.add_neuron(Activation::Relu, -f.breakpoints[i],
                                    {Term{input_source(0), 1.0}});
        out.push_back(Term{id, f.slopes[i] - prev_w});
        prev_w = f.slopes[i];
    }
    b.set_output(f.anchor, std::move(out));
    return std::move(b).build();
}

Network build_deep(const PwlFunction1D& f) {
    f.validate();
    const int n = f.piece_count();
    std::vector<double> delta(n);
    double prev_w = 0.0;
    for (int i = 0; i < n; ++i) {
        delta[i] = f.slopes[i] - prev_w;
        prev_w = f.slopes[i];
        if (std::abs(delta[i]) <= kSlopeMergeTol)
            throw input_error("build_deep: degenerate slope delta at piece " +
                              std::to_string(i) + "; merge pieces first");
    }
    NetworkBuilder b(1);
    std::vector<Term> out;
    int prev = -1;
    for (int i = 0; i < n; ++i) {
        const double d = std::abs(delta[i]);
        int id;
        if (i == 0) {
            id = b.add_neuron(Activation::Relu, -d * f.breakpoints[0],
                              {Term{input_source(0), d}});
        } else {
            // R_i = relu(|dw_i|/|dw_{i-1}| R_{i-1} + |dw_i| (x_{i-1} - x_i))
            id = b.add_neuron(Activation::Relu,
                              d * (f.breakpoints[i - 1] - f.breakpoints[i]),
                              {Term{prev, d / std::abs(delta[i - 1])}});
        }
        out.push_back(Term{id, delta[i] > 0 ? 1.0 : -1.0});
        prev = id;
    }
    b.set_output(f.anchor, std::move(out));
    return std::move(b).build();
}

using nlohmann::json;

std::string serialize_pwl(const PwlFunction1D& f) {
    json doc;
    doc["B"] = f.B;
    doc["breakpoints"] = f.breakpoints;
    doc["slopes"] = f.slopes;
    doc["anchor"] = f.anchor;
    return doc.dump(2);
}

PwlFunction1D deserialize_pwl(const std::string& text) {
    try {
        const json doc = json::parse(text);
        PwlFunction1D f;
        f.B = doc.at("B").get<double>();
        f.breakpoints = doc.at("breakpoints").get<std::vector<double>>();
        f.slopes = doc.at("slopes").get<std::vector<double>>();
        f.anchor = doc.at("anchor").get<double>();
        f.validate();
        return f;
    } catch (const json::exception& e) {
        throw parse_error(std::string("malformed pwl document: ") + e.what());
    }
}

PwlFunction1D load_pwl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return deserialize_pwl(ss.str());
}

void save_pwl(const PwlFunction1D& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot open " + path + " for writing");
    out << serialize_pwl(f) << "\n";
}

}  // namespace netmorph
