#include "netmorph/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

#ifdef NETMORPH_HAVE_OPENMP
#include <omp.h>
#endif

#include "netmorph/errors.hpp"
#include "netmorph/pwl1d.hpp"
#include "netmorph/rng.hpp"

namespace netmorph {

double Box::volume() const {
    double v = 1.0;
    for (size_t j = 0; j < lo.size(); ++j) v *= hi[j] - lo[j];
    return v;
}

Box Box::centered(int D, double B) {
    Box b;
    b.lo.assign(D, -B);
    b.hi.assign(D, B);
    return b;
}

namespace {

int capped_threads() {
#ifdef NETMORPH_HAVE_OPENMP
    int n = omp_get_max_threads();
    if (const char* env = std::getenv("NETMORPH_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) n = std::min(n, cap);
    }
    return std::max(1, n);
#else
    return 1;
#endif
}

// Counts mismatches over the shard's sample range. Coordinates of sample s
// come from counters s*D + j, so the sample set does not depend on sharding.
uint64_t shard_mismatches(const Evaluator& ea, const Evaluator& eb, const Box& box,
                          uint64_t begin, uint64_t end, uint64_t seed, double tol,
                          bool classification, std::vector<double>& xs,
                          std::vector<double>& sa, std::vector<double>& sb) {
    const int D = box.dim();
    uint64_t bad = 0;
    for (uint64_t s = begin; s < end; ++s) {
        for (int j = 0; j < D; ++j) {
            const double u = unit_double(seed, 0, s * static_cast<uint64_t>(D) + j);
            xs[j] = box.lo[j] + (box.hi[j] - box.lo[j]) * u;
        }
        const double va = ea(xs, sa);
        const double vb = eb(xs, sb);
        if (classification) {
            bad += (va >= 0.5) != (vb >= 0.5) ? 1 : 0;
        } else {
            bad += std::abs(va - vb) > tol ? 1 : 0;
        }
    }
    return bad;
}

}  // namespace

MismatchReport mismatch_measure(const Network& a, const Network& b, const Box& domain,
                                uint64_t samples, uint64_t seed, double tol,
                                bool classification, ExecMode mode) {
    if (a.input_dim() != b.input_dim() || a.input_dim() != domain.dim())
        throw input_error("mismatch_measure: dimension mismatch");
    if (samples < 1000) throw input_error("mismatch_measure: need at least 1000 samples");

    const Evaluator& ea = a.evaluator();
    const Evaluator& eb = b.evaluator();
    const uint64_t per = (samples + kShardCount - 1) / kShardCount;
    uint64_t counts[kShardCount] = {};

    if (mode == ExecMode::Serial) {
        std::vector<double> xs(domain.dim()), sa, sb;
        for (int sh = 0; sh < kShardCount; ++sh) {
            const uint64_t begin = std::min<uint64_t>(samples, sh * per);
            const uint64_t end = std::min<uint64_t>(samples, (sh + 1) * per);
            counts[sh] = shard_mismatches(ea, eb, domain, begin, end, seed, tol,
                                          classification, xs, sa, sb);
        }
    } else {
        const int threads = capped_threads();
#ifdef NETMORPH_HAVE_OPENMP
#pragma omp parallel num_threads(threads)
        {
            std::vector<double> xs(domain.dim()), sa, sb;
#pragma omp for schedule(dynamic)
            for (int sh = 0; sh < kShardCount; ++sh) {
                const uint64_t begin = std::min<uint64_t>(samples, sh * per);
                const uint64_t end = std::min<uint64_t>(samples, (sh + 1) * per);
                counts[sh] = shard_mismatches(ea, eb, domain, begin, end, seed, tol,
                                              classification, xs, sa, sb);
            }
        }
#else
        (void)threads;
        std::vector<double> xs(domain.dim()), sa, sb;
        for (int sh = 0; sh < kShardCount; ++sh) {
            const uint64_t begin = std::min<uint64_t>(samples, sh * per);
            const uint64_t end = std::min<uint64_t>(samples, (sh + 1) * per);
            counts[sh] = shard_mismatches(ea, eb, domain, begin, end, seed, tol,
                                          classification, xs, sa, sb);
        }
#endif
    }

    uint64_t bad = 0;
    for (int sh = 0; sh < kShardCount; ++sh) bad += counts[sh];

    MismatchReport r;
    r.samples = samples;
    r.seed = seed;
    r.value_tolerance = tol;
    r.estimate = static_cast<double>(bad) / static_cast<double>(samples);
    r.stderr_ = std::sqrt(r.estimate * (1.0 - r.estimate) / static_cast<double>(samples));
    r.absolute_measure = r.estimate * domain.volume();
    return r;
}

double exact_compare_1d(const Network& a, const Network& b, double B, int grid_points) {
    if (a.input_dim() != 1 || b.input_dim() != 1)
        throw input_error("exact_compare_1d: univariate networks only");
    std::vector<double> xs;
    xs.reserve(grid_points + 16);
    for (int i = 0; i <= grid_points; ++i)
        xs.push_back(-B + 2.0 * B * i / std::max(1, grid_points));
    for (const Network* n : {&a, &b}) {
        try {
            const PwlFunction1D f = extract_pwl(*n, B);
            xs.insert(xs.end(), f.breakpoints.begin(), f.breakpoints.end());
        } catch (const unsupported_error&) {
            // binary-step networks contribute grid points only
        }
    }
    double err = 0.0;
    for (double x : xs) err = std::max(err, std::abs(a.evaluate1(x) - b.evaluate1(x)));
    return err;
}

std::string AuditResult::summary() const {
    if (pass) return "ok";
    std::ostringstream ss;
    for (const auto& d : diffs)
        ss << d.field << ": expected " << d.expected << ", got " << d.actual << "; ";
    return ss.str();
}

AuditResult structural_audit(const Network& net, const StructureMetrics& expected) {
    const StructureMetrics got = net.metrics();
    AuditResult res;
    if (expected.width > 0 && got.width != expected.width) {
        res.pass = false;
        res.diffs.push_back({"width", expected.width, got.width});
    }
    if (expected.depth > 0 && got.depth != expected.depth) {
        res.pass = false;
        res.diffs.push_back({"depth", expected.depth, got.depth});
    }
    if (expected.neuron_count > 0 && got.neuron_count != expected.neuron_count) {
        res.pass = false;
        res.diffs.push_back({"neuron_count", expected.neuron_count, got.neuron_count});
    }
    return res;
}

std::pair<double, double> width_depth_estimate(double n_sigma, double L, double n,
                                               double alpha) {
    if (n_sigma <= 0.0 || L <= 0.0 || n <= 0.0 || alpha <= 0.0)
        throw input_error("width_depth_estimate: inputs must be positive");
    const double width = std::max(n_sigma, L * n);
    const double depth = alpha * std::log2(n_sigma) + std::log2(n);
    return {width, depth};
}

std::string report_to_json(const MismatchReport& r) {
    nlohmann::json j;
    j["estimate"] = r.estimate;
    j["stderr"] = r.stderr_;
    j["samples"] = r.samples;
    j["seed"] = r.seed;
    j["tol"] = r.value_tolerance;
    j["absolute_measure"] = r.absolute_measure;
    return j.dump(2);
}

}  // namespace netmorph
