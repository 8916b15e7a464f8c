#ifndef NETMORPH_TEST_HELPERS_HPP
#define NETMORPH_TEST_HELPERS_HPP

#include <cmath>
#include <vector>

#include "netmorph/geometry.hpp"
#include "netmorph/network.hpp"
#include "netmorph/pwl1d.hpp"
#include "netmorph/rng.hpp"

namespace netmorph::testing {

// relu(w*x + b) as a one-neuron network.
inline Network relu_scalar(double w, double b) {
    NetworkBuilder nb(1);
    const int id = nb.add_neuron(Activation::Relu, b, {Term{input_source(0), w}});
    nb.set_output(0.0, {Term{id, 1.0}});
    return std::move(nb).build();
}

inline Network constant_net(int D, double c) {
    NetworkBuilder nb(D);
    nb.set_output(c, {});
    return std::move(nb).build();
}

// |x| = relu(x) + relu(-x)
inline Network abs_net() {
    NetworkBuilder nb(1);
    const int p = nb.add_neuron(Activation::Relu, 0.0, {Term{input_source(0), 1.0}});
    const int m = nb.add_neuron(Activation::Relu, 0.0, {Term{input_source(0), -1.0}});
    nb.set_output(0.0, {Term{p, 1.0}, Term{m, 1.0}});
    return std::move(nb).build();
}

// Random continuous PWL with well-separated breakpoints and slope deltas.
inline PwlFunction1D random_pwl(CounterRng& rng, int pieces, double B) {
    PwlFunction1D f;
    f.B = B;
    f.breakpoints.push_back(-B);
    if (pieces > 1) {
        std::vector<double> inner(pieces - 1);
        for (auto& x : inner) x = rng.uniform(-B * 0.98, B * 0.98);
        std::sort(inner.begin(), inner.end());
        double last = -B;
        for (double x : inner) {
            if (x - last < 1e-4 * B) x = last + 1e-4 * B;
            f.breakpoints.push_back(x);
            last = x;
        }
    }
    f.breakpoints.push_back(B);
    // strictly increasing repair after the nudge above
    for (size_t i = 1; i < f.breakpoints.size(); ++i)
        if (f.breakpoints[i] <= f.breakpoints[i - 1])
            f.breakpoints[i] = f.breakpoints[i - 1] + 1e-5 * B;
    f.breakpoints.back() = std::max(f.breakpoints.back(), B);

    f.anchor = rng.uniform(-2.0, 2.0);
    double w = rng.uniform(-3.0, 3.0);
    for (size_t i = 0; i + 1 < f.breakpoints.size(); ++i) {
        f.slopes.push_back(w);
        double step = rng.uniform(0.05, 2.0);
        if (rng.next_unit() < 0.5) step = -step;
        w += step;
    }
    return f;
}

// Random 2D simplex inside [-span, span]^2 with decent conditioning.
inline Simplex random_simplex_2d(CounterRng& rng, double span) {
    for (;;) {
        Simplex s;
        for (int i = 0; i < 3; ++i)
            s.vertices.push_back({rng.uniform(-span, span), rng.uniform(-span, span)});
        const double ax = s.vertices[1][0] - s.vertices[0][0];
        const double ay = s.vertices[1][1] - s.vertices[0][1];
        const double bx = s.vertices[2][0] - s.vertices[0][0];
        const double by = s.vertices[2][1] - s.vertices[0][1];
        const double det = ax * by - ay * bx;
        if (std::abs(det) > 0.05 * span * span) return s;
    }
}

// Uniform point inside a simplex (flattened exponential-spacings trick).
inline Vec random_point_in_simplex(CounterRng& rng, const Simplex& s) {
    const int D = s.dim();
    std::vector<double> w(D + 1);
    double total = 0.0;
    for (auto& v : w) {
        v = -std::log(1.0 - rng.next_unit() + 1e-300);
        total += v;
    }
    Vec x(D, 0.0);
    for (int i = 0; i <= D; ++i)
        for (int j = 0; j < D; ++j) x[j] += (w[i] / total) * s.vertices[i][j];
    return x;
}

// Distance from x to the nearest face plane of the simplex.
inline double boundary_clearance(const Simplex& s, std::span<const double> x) {
    const auto faces = face_functionals(s);
    double best = 1e300;
    for (const auto& f : faces) {
        double n2 = 0.0;
        for (double p : f.p) n2 += p * p;
        best = std::min(best, std::abs(f(x)) / std::sqrt(n2));
    }
    return best;
}

}  // namespace netmorph::testing

#endif
