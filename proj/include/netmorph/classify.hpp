#ifndef NETMORPH_CLASSIFY_HPP
#define NETMORPH_CLASSIFY_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "netmorph/geometry.hpp"
#include "netmorph/network.hpp"
#include "netmorph/regress.hpp"

namespace netmorph {

// One rule region: label 1 inside, 0 outside.
struct Rule {
    enum class Kind { Box, Simplex };
    Kind kind = Kind::Box;
    Hypercube box;
    Simplex simplex;
};

struct RuleSystem {
    int D = 0;
    std::vector<Rule> rules;
};

std::string serialize_rules(const RuleSystem& rs);
RuleSystem deserialize_rules(const std::string& text);
RuleSystem load_rules(const std::string& path);
void save_rules(const RuleSystem& rs, const std::string& path);

// Partition of rule indices into wide groups S_1..S_P and deep groups
// T_1..T_Q; every rule index must appear exactly once.
struct ArchitecturePlan {
    std::vector<std::vector<int>> wide_groups;
    std::vector<std::vector<int>> deep_groups;

    static ArchitecturePlan all_wide(int n);
    static ArchitecturePlan all_deep(int n);
};

// --- binary-step networks over simplices --------------------------------

// z(sum_i z(l_i(x)) - (D+1)): the closed-simplex indicator, exact (z(0)=1
// keeps boundaries inside). Width D+1, depth 2.
Network build_step_wide_block(const Simplex& s);

// Sum of per-simplex blocks behind a final 1/2 threshold; the indicator of
// the union for interior-disjoint rules.
Network build_step_wide(std::span<const Simplex> rules, int D);

// mu with 1/(mu-1) at half of delta / (C K), C = hyperplane_area_bound.
double choose_step_mu(int D, double B, int K, double delta);

// Binary-step fan chain z(F_j - mu^j z(-l_{j+1}) - 1/2) cut by every face in
// turn. Width D+1, depth D+1. Within [-B,B]^D and mu >= 2 the block matches
// the simplex indicator away from the boundary faces.
Network build_step_deep_block(const Simplex& s, double mu, double B);

// Blocks stacked longitudinally behind a final 1/2 threshold.
Network build_step_deep(std::span<const Simplex> rules, int D, double mu, double B);

// --- De Morgan constructions over hypercubes ------------------------------

// Largest ramp that respects the quoted multivariate bound
// delta < (1 - (eps/2)^{1/n})/2, the pairwise gaps, the rule sides, and an
// eps-level cap on the total ramp-shell measure.
double default_ramp(const RuleSystem& rs, double eps);

// Chained trapezoid blocks computing A_1 v ... v A_n with linear ramps of
// width `ramp` around each hypercube.
Network build_demorgan_deep(const RuleSystem& rs, double ramp);

// Trap-like blocks (1 - trapezoid) combined through the n-1 threshold:
// 1 - clamp(sum not A_i - (n-1)) with clamp(t) = relu(t) - relu(t-1).
Network build_demorgan_wide(const RuleSystem& rs, double ramp);

// Re-expressed De Morgan family: wide-style sub-networks per S_p plus
// chained sub-networks per T_q, summed. all_deep/all_wide plans reduce to
// the two constructions above.
Network build_mixed(const RuleSystem& rs, const ArchitecturePlan& plan, double ramp);

struct ClassifyResult {
    Network net;
    int M = 0;       // simplices in the label-1 cover
    double mu = 0.0; // deep path only
};

// Thresholded-network transform: extracts the label-1 region of z(net(x)),
// triangulates it, and dispatches to the binary-step builders.
ClassifyResult classify_transform(const Network& net, TransformTask task, double delta,
                                  double B, uint64_t seed);

}  // namespace netmorph

#endif
