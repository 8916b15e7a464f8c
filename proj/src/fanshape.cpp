#include "netmorph/fanshape.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>

#include "netmorph/errors.hpp"

namespace netmorph {

double mu_power(double mu, int j, bool* capped) {
    double v = 1.0;
    bool hit = false;
    for (int i = 0; i < j; ++i) {
        v *= mu;
        if (v > kMuPowerCap) {
            v = kMuPowerCap;
            hit = true;
        }
    }
    if (hit) {
        static std::atomic<bool> warned{false};
        if (!warned.exchange(true))
            std::fputs("netmorph: mu power capped at 1e12; deeper chains lose accuracy\n",
                       stderr);
    }
    if (capped) *capped = hit;
    return v;
}

double hyperplane_area_bound(int D, double B) {
    return std::pow(2.0 * B, D - 1) * std::sqrt(static_cast<double>(D));
}

namespace {

// Smallest eigenvalue of the symmetric matrix P^T P by cyclic Jacobi.
double smallest_singular_value(const std::vector<AffineFunctional>& h, int D) {
    Mat g(D, D);
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) {
            double s = 0.0;
            for (int k = 0; k < D; ++k) s += h[i].p[k] * h[j].p[k];
            g(i, j) = s;
        }
    for (int sweep = 0; sweep < 50; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < D; ++p)
            for (int q = p + 1; q < D; ++q) off += g(p, q) * g(p, q);
        if (off < 1e-30) break;
        for (int p = 0; p < D; ++p)
            for (int q = p + 1; q < D; ++q) {
                if (g(p, q) == 0.0) continue;
                const double theta = 0.5 * std::atan2(2.0 * g(p, q), g(q, q) - g(p, p));
                const double c = std::cos(theta), s = std::sin(theta);
                for (int k = 0; k < D; ++k) {
                    const double gpk = g(p, k), gqk = g(q, k);
                    g(p, k) = c * gpk - s * gqk;
                    g(q, k) = s * gpk + c * gqk;
                }
                for (int k = 0; k < D; ++k) {
                    const double gkp = g(k, p), gkq = g(k, q);
                    g(k, p) = c * gkp - s * gkq;
                    g(k, q) = s * gkp + c * gkq;
                }
            }
    }
    double lo = g(0, 0);
    for (int i = 1; i < D; ++i) lo = std::min(lo, g(i, i));
    return std::sqrt(std::max(0.0, lo));
}

std::vector<Term> functional_terms(const AffineFunctional& f) {
    std::vector<Term> in;
    for (size_t j = 0; j < f.p.size(); ++j)
        if (f.p[j] != 0.0) in.push_back(Term{input_source(static_cast<int>(j)), f.p[j]});
    if (in.empty()) in.push_back(Term{input_source(0), 0.0});
    return in;
}

}  // namespace

void validate_fan_spec(const FanSpec& spec) {
    const int D = spec.dim();
    if (static_cast<int>(spec.h.size()) != D || D < 2)
        throw input_error("fan spec needs D >= 2 functionals of matching dimension");
    for (const auto& f : spec.h)
        if (static_cast<int>(f.p.size()) != D)
            throw input_error("fan spec functional dimension mismatch");
    if (spec.mu < 2.0) throw input_error("fan spec requires mu >= 2");
    if (smallest_singular_value(spec.h, D) <= 1e-10)
        throw input_error("fan spec gradients are linearly dependent");
}

Network build_fan_2d(const FanSpec& spec) {
    validate_fan_spec(spec);
    if (spec.dim() != 2) throw input_error("build_fan_2d: D must be 2");
    NetworkBuilder b(2);
    const int guard = b.add_neuron(Activation::Relu, spec.h[1].r, functional_terms(spec.h[1]));
    auto in = functional_terms(spec.h[0]);
    in.push_back(Term{guard, -spec.mu});
    const int top = b.add_neuron(Activation::Relu, spec.h[0].r, std::move(in));
    b.set_output(0.0, {Term{top, 1.0}});
    return std::move(b).build();
}

Network build_fan_nd(const FanSpec& spec) {
    validate_fan_spec(spec);
    const int D = spec.dim();
    NetworkBuilder b(D);
    int chain = -1;
    for (int j = 1; j < D; ++j) {
        const int guard = b.add_neuron(Activation::Relu, spec.h[j].r, functional_terms(spec.h[j]));
        if (j == 1) {
            auto in = functional_terms(spec.h[0]);
            in.push_back(Term{guard, -spec.mu});
            chain = b.add_neuron(Activation::Relu, spec.h[0].r, std::move(in));
        } else {
            chain = b.add_neuron(Activation::Relu, 0.0,
                                 {Term{chain, 1.0}, Term{guard, -mu_power(spec.mu, j)}});
        }
    }
    b.set_output(0.0, {Term{chain, 1.0}});
    return std::move(b).build();
}

double slack_measure_bound(const FanSpec& spec, double B) {
    validate_fan_spec(spec);
    const int D = spec.dim();
    const double C = hyperplane_area_bound(D, B);
    double sum = 0.0;
    for (int j = 1; j < D; ++j) sum += 1.0 / mu_power(spec.mu, j);
    return C * sum;
}

}  // namespace netmorph
