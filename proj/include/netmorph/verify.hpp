#ifndef NETMORPH_VERIFY_HPP
#define NETMORPH_VERIFY_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "netmorph/network.hpp"

namespace netmorph {

struct Box {
    std::vector<double> lo, hi;
    int dim() const { return static_cast<int>(lo.size()); }
    double volume() const;
    static Box centered(int D, double B);
};

struct MismatchReport {
    double estimate = 0.0;  // fraction of the domain volume
    double stderr_ = 0.0;   // sqrt(p(1-p)/n)
    double absolute_measure = 0.0;
    uint64_t samples = 0;
    uint64_t seed = 0;
    double value_tolerance = 0.0;
};

std::string report_to_json(const MismatchReport& r);

constexpr int kShardCount = 64;
constexpr double kDefaultValueTol = 1e-6;

enum class ExecMode { Serial, Parallel };

// Fraction of the box where |a - b| > tol (or, with `classification`, where
// the 1/2-thresholded labels differ), from `samples` counter-indexed uniform
// points. Results are identical for both exec modes and any thread count:
// the 64 shards draw from disjoint counter ranges and integer tallies are
// summed. NETMORPH_THREADS caps the parallel worker count.
MismatchReport mismatch_measure(const Network& a, const Network& b, const Box& domain,
                                uint64_t samples, uint64_t seed,
                                double tol = kDefaultValueTol,
                                bool classification = false,
                                ExecMode mode = ExecMode::Parallel);

// Max |a - b| over a uniform grid on [-B, B] joined with both networks'
// breakpoints (where extractable).
double exact_compare_1d(const Network& a, const Network& b, double B, int grid_points);

struct AuditDiff {
    std::string field;
    int expected = 0;
    int actual = 0;
};

struct AuditResult {
    bool pass = true;
    std::vector<AuditDiff> diffs;
    std::string summary() const;
};

// Integer comparison of width/depth against the closed-form expectations.
AuditResult structural_audit(const Network& net, const StructureMetrics& expected);

// Width = max(N_sigma, L*n); Depth = alpha*log2(N_sigma) + log2(n).
std::pair<double, double> width_depth_estimate(double n_sigma, double L, double n,
                                               double alpha);

}  // namespace netmorph

#endif
