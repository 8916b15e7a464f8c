#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "netmorph/errors.hpp"
#include "netmorph/pwl1d.hpp"
#include "netmorph/rng.hpp"

using namespace netmorph;
using namespace netmorph::testing;

namespace {

double grid_max_err(const Network& net, const PwlFunction1D& f, int points) {
    double err = 0.0;
    for (int i = 0; i <= points; ++i) {
        const double x = -f.B + 2.0 * f.B * i / points;
        err = std::max(err, std::abs(net.evaluate1(x) - f.evaluate(x)));
    }
    for (double x : f.breakpoints)
        err = std::max(err, std::abs(net.evaluate1(x) - f.evaluate(x)));
    return err;
}

}  // namespace

TEST_CASE("extract_pwl: identity net relu(x) - relu(-x)") {
    NetworkBuilder b(1);
    const int p = b.add_neuron(Activation::Relu, 0.0, {Term{input_source(0), 1.0}});
    const int m = b.add_neuron(Activation::Relu, 0.0, {Term{input_source(0), -1.0}});
    b.set_output(0.0, {Term{p, 1.0}, Term{m, -1.0}});
    const PwlFunction1D f = extract_pwl(std::move(b).build(), 1.0);
    CHECK(f.piece_count() == 1);
    CHECK(f.slopes[0] == doctest::Approx(1.0));
    CHECK(f.anchor == doctest::Approx(-1.0));
}

TEST_CASE("extract_pwl: |x| has a breakpoint at zero") {
    const PwlFunction1D f = extract_pwl(abs_net(), 1.0);
    REQUIRE(f.piece_count() == 2);
    CHECK(f.breakpoints[1] == doctest::Approx(0.0));
    CHECK(f.slopes[0] == doctest::Approx(-1.0));
    CHECK(f.slopes[1] == doctest::Approx(1.0));
    CHECK(f.anchor == doctest::Approx(1.0));
}

TEST_CASE("extract_pwl matches a random 3-layer net on a dense grid") {
    CounterRng rng(2024);
    NetworkBuilder b(1);
    std::vector<int> layer1;
    for (int i = 0; i < 5; ++i)
        layer1.push_back(b.add_neuron(Activation::Relu, rng.uniform(-1, 1),
                                      {Term{input_source(0), rng.uniform(-2, 2)}}));
    std::vector<int> layer2;
    for (int i = 0; i < 4; ++i) {
        std::vector<Term> in{Term{input_source(0), rng.uniform(-1, 1)}};
        for (int s : layer1) in.push_back(Term{s, rng.uniform(-1.5, 1.5)});
        layer2.push_back(b.add_neuron(Activation::Relu, rng.uniform(-1, 1), std::move(in)));
    }
    std::vector<Term> out;
    for (int s : layer2) out.push_back(Term{s, rng.uniform(-1, 1)});
    b.set_output(rng.uniform(-1, 1), std::move(out));
    const Network net = std::move(b).build();

    const PwlFunction1D f = extract_pwl(net, 2.0);
    double err = 0.0;
    for (int i = 0; i <= 10000; ++i) {
        const double x = -2.0 + 4.0 * i / 10000.0;
        err = std::max(err, std::abs(net.evaluate1(x) - f.evaluate(x)));
    }
    CHECK(err < 1e-9);
}

TEST_CASE("extract_pwl refuses binary-step nets and bad B") {
    NetworkBuilder b(1);
    const int id = b.add_neuron(Activation::BinaryStep, 0.0, {Term{input_source(0), 1.0}});
    b.set_output(0.0, {Term{id, 1.0}});
    const Network net = std::move(b).build();
    CHECK_THROWS_AS(extract_pwl(net, 1.0), unsupported_error);
    CHECK_THROWS_AS(extract_pwl(relu_scalar(1, 0), -1.0), input_error);
}

TEST_CASE("build_wide: one-piece f(x)=2x+1 on [-1,1]") {
    PwlFunction1D f;
    f.B = 1.0;
    f.breakpoints = {-1.0, 1.0};
    f.slopes = {2.0};
    f.anchor = -1.0;  // f(-1)
    const Network h1 = build_wide(f);
    CHECK(h1.neurons().size() == 1);
    CHECK(h1.evaluate1(0.0) == doctest::Approx(1.0));
    CHECK(h1.evaluate1(0.5) == doctest::Approx(2.0));
    CHECK(h1.metrics().width == 1);
}

TEST_CASE("hat function: wide and deep agree with the function") {
    PwlFunction1D f;
    f.B = 1.0;
    f.breakpoints = {-1.0, 0.0, 1.0};
    f.slopes = {1.0, -1.0};
    f.anchor = 0.0;
    const Network h1 = build_wide(f);
    const Network h2 = build_deep(f);
    CHECK(h1.evaluate1(0.5) == doctest::Approx(0.5));
    CHECK(h2.evaluate1(0.5) == doctest::Approx(0.5));
    CHECK(h2.evaluate1(-0.5) == doctest::Approx(0.5));
    CHECK(grid_max_err(h1, f, 2000) < 1e-12);
    CHECK(grid_max_err(h2, f, 2000) < 1e-12);
}

TEST_CASE("build_deep: one-piece depth is n+2 = 2") {
    PwlFunction1D f;
    f.B = 1.0;
    f.breakpoints = {-1.0, 1.0};
    f.slopes = {2.0};
    f.anchor = -1.0;
    const Network h2 = build_deep(f);
    CHECK(h2.metrics().depth == 2);
    CHECK(h2.evaluate1(0.25) == doctest::Approx(1.5));
}

TEST_CASE("random 50-piece pwl: exactness and structural counts") {
    CounterRng rng(99);
    const PwlFunction1D f = random_pwl(rng, 50, 2.0);
    REQUIRE(f.piece_count() == 50);
    const Network h1 = build_wide(f);
    const Network h2 = build_deep(f);
    CHECK(grid_max_err(h1, f, 10000) < 1e-9);
    CHECK(grid_max_err(h2, f, 10000) < 1e-9);
    CHECK(h1.metrics().width == 50);   // n+1 with n = 49 interior breakpoints
    CHECK(h2.metrics().depth == 51);   // n+2
    CHECK(h2.metrics().width == 1);    // pure chain
}

TEST_CASE("round trip: extract_pwl(build_wide(f)) reproduces f") {
    CounterRng rng(123);
    const PwlFunction1D f = random_pwl(rng, 12, 1.5);
    const PwlFunction1D g = extract_pwl(build_wide(f), f.B);
    REQUIRE(g.piece_count() == f.piece_count());
    for (size_t i = 0; i < f.breakpoints.size(); ++i)
        CHECK(g.breakpoints[i] == doctest::Approx(f.breakpoints[i]).epsilon(1e-9));
    for (size_t i = 0; i < f.slopes.size(); ++i)
        CHECK(g.slopes[i] == doctest::Approx(f.slopes[i]).epsilon(1e-9));
}

TEST_CASE("build_deep rejects degenerate slope deltas") {
    PwlFunction1D f;
    f.B = 1.0;
    f.breakpoints = {-1.0, 0.0, 1.0};
    f.slopes = {1.0, 1.0 + 1e-12};
    f.anchor = 0.0;
    CHECK_THROWS_AS(build_deep(f), input_error);
}

TEST_CASE("pwl document round trip") {
    CounterRng rng(5);
    const PwlFunction1D f = random_pwl(rng, 7, 2.0);
    const PwlFunction1D g = deserialize_pwl(serialize_pwl(f));
    CHECK(g.B == f.B);
    CHECK(g.anchor == f.anchor);
    CHECK(g.breakpoints == f.breakpoints);
    CHECK(g.slopes == f.slopes);
}

TEST_CASE("extraction fuzz: shortcut and identity nets match dense evaluation") {
    CounterRng rng(777);
    for (int trial = 0; trial < 10; ++trial) {
        NetworkBuilder b(1);
        std::vector<int> pool;
        const int layers = 2 + static_cast<int>(rng.next_u64() % 3);
        for (int layer = 0; layer < layers; ++layer) {
            const int width = 2 + static_cast<int>(rng.next_u64() % 4);
            std::vector<int> next;
            for (int i = 0; i < width; ++i) {
                std::vector<Term> in{Term{input_source(0), rng.uniform(-2, 2)}};
                for (int s : pool)
                    if (rng.next_unit() < 0.6) in.push_back(Term{s, rng.uniform(-1.5, 1.5)});
                const Activation act =
                    rng.next_unit() < 0.85 ? Activation::Relu : Activation::Identity;
                next.push_back(b.add_neuron(act, rng.uniform(-1, 1), std::move(in)));
            }
            for (int s : next) pool.push_back(s);
        }
        std::vector<Term> out;
        for (int s : pool)
            if (rng.next_unit() < 0.7) out.push_back(Term{s, rng.uniform(-1, 1)});
        if (out.empty()) out.push_back(Term{pool.back(), 1.0});
        b.set_output(rng.uniform(-1, 1), std::move(out));
        const Network net = std::move(b).build();

        const double B = 2.0;
        const PwlFunction1D f = extract_pwl(net, B);
        double err = 0.0;
        for (int i = 0; i <= 20000; ++i) {
            const double x = -B + 2.0 * B * i / 20000.0;
            err = std::max(err, std::abs(net.evaluate1(x) - f.evaluate(x)));
        }
        CHECK(err < 1e-9);
    }
}
