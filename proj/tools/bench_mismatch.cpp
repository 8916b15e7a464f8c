// Times the serial reference against the OpenMP mismatch kernel on a
// mid-size transformed network pair and checks the counts agree.

#include <chrono>
#include <cstdio>

#include "netmorph/network.hpp"
#include "netmorph/regress.hpp"
#include "netmorph/rng.hpp"
#include "netmorph/verify.hpp"

using namespace netmorph;

namespace {

Network test_net() {
    NetworkBuilder b(2);
    const int u = b.add_neuron(Activation::Relu, 0.1, {Term{input_source(0), 1.0}});
    const int v = b.add_neuron(Activation::Relu, -0.4,
                               {Term{input_source(0), 1.0}, Term{input_source(1), 1.0}});
    const int w = b.add_neuron(Activation::Relu, 0.2,
                               {Term{input_source(1), -1.3}, Term{u, 0.5}});
    b.set_output(0.0, {Term{u, 1.0}, Term{v, 0.5}, Term{w, -0.7}});
    return std::move(b).build();
}

}  // namespace

int main() {
    const Network src = test_net();
    const double B = 1.0;
    const TransformResult wide = transform(src, TransformTask::Wide, 0.05, B, 7);
    const TransformResult deep = transform(src, TransformTask::Deep, 0.05, B, 7);
    const Box box = Box::centered(2, B);
    const uint64_t samples = 2000000;

    std::printf("wide: %d neurons, deep: %d neurons, M=%d\n",
                wide.net.metrics().neuron_count, deep.net.metrics().neuron_count,
                wide.report.M);

    using clock = std::chrono::steady_clock;

    auto t0 = clock::now();
    const auto serial = mismatch_measure(wide.net, deep.net, box, samples, 42,
                                         kDefaultValueTol, false, ExecMode::Serial);
    auto t1 = clock::now();
    const auto parallel = mismatch_measure(wide.net, deep.net, box, samples, 42,
                                           kDefaultValueTol, false, ExecMode::Parallel);
    auto t2 = clock::now();

    const double ts = std::chrono::duration<double>(t1 - t0).count();
    const double tp = std::chrono::duration<double>(t2 - t1).count();
    std::printf("serial:   %.3f s  (%.1f Msamples/s)\n", ts, samples / ts / 1e6);
    std::printf("parallel: %.3f s  (%.1f Msamples/s)  speedup %.2fx\n", tp,
                samples / tp / 1e6, ts / tp);
    std::printf("estimates: serial %.6g, parallel %.6g -> %s\n", serial.estimate,
                parallel.estimate, serial.estimate == parallel.estimate ? "match" : "MISMATCH");
    return serial.estimate == parallel.estimate ? 0 : 1;
}
