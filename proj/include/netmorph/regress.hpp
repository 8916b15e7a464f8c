#ifndef NETMORPH_REGRESS_HPP
#define NETMORPH_REGRESS_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "netmorph/geometry.hpp"
#include "netmorph/linalg.hpp"
#include "netmorph/network.hpp"
#include "netmorph/pwl1d.hpp"

namespace netmorph {

enum class TransformTask { Wide, Deep };

struct TransformParams {
    double mu = 1e4;
    double eta = 1e-4;
    double nu = 1e-4;
    double tau = 1e-4;  // used for both boundary perturbations of the deep net
    double delta = 0.0;
    double B = 1.0;
};

// Parameters strictly inside the per-simplex bounds (at half the bound), so
// the per-simplex mismatch measure stays below delta:
//   D=2 wide:  eta, 1/mu < delta / (30 sqrt(2) B)
//   D=2 deep:  nu, tau, 1/mu < delta / (22 sqrt(2) B)
//   D>=3 wide: eta, 1/(mu-1) < delta / ((2^D - 1) C (2D+1))
//   D>=3 deep: nu, tau, 1/(mu-1) < delta / (C (2D^2 + 3D))
// with C = hyperplane_area_bound(D, B). Throws infeasible_error when mu
// would exceed the power cap; the minimal achievable delta rides along.
TransformParams choose_params(TransformTask task, int D, double B, double delta);

// The (D+1)x(D+1) cancellation system for one fan-shaped domain: column k is
// the payload h1 - eta_k * m_k (m = skipped-coordinate perturbations then the
// constant), rows are x-coefficients then the constant, rhs is -(a, b).
BasisSolve wide_cancellation_system(const AffineFunctional& payload, int skip_coord,
                                    double eta, std::span<const double> a, double b);

// gamma system of the deep block: D fan payloads x0 - nu_k x_k (nu_0 = 0)
// plus a constant column, equated to the target functional.
BasisSolve deep_gamma_system(int D, double nu, std::span<const double> target_p,
                             double target_r);

// rho system: D+1 block targets l_D - tau * x_{l-1} (block 0 unperturbed)
// equated to a^T x + b.
BasisSolve deep_rho_system(int D, double tau, std::span<const double> a, double b);

// Per-simplex networks. The 2D builders realize the three-fan-domain
// construction with its stated counts (width 20 / depth 3 wide, width 12 /
// depth 4 deep); the general builders cover D in [2, 8] with counts
// D(D+1)(2^D-1)+2 / D+1 and D^2(D+1) / D+2.
Network build_wide_piece_2d(const LinearPiece& piece, const TransformParams& params);
Network build_deep_piece_2d(const LinearPiece& piece, const TransformParams& params);
Network build_wide_piece_nd(const LinearPiece& piece, const TransformParams& params);
Network build_deep_piece_nd(const LinearPiece& piece, const TransformParams& params);

// Analytic per-simplex mismatch-measure budgets.
double wide_piece_budget(int D, double B, const TransformParams& params);
double deep_piece_budget(int D, double B, const TransformParams& params);

// One fan-shaped domain of the template arrangement: the hyperplane at
// `excluded` is free, the others carry the given sign (+1 keeps l_i >= 0).
struct FanDomain {
    int excluded;
    std::vector<int8_t> sign;  // size D+1; sign[excluded] unused
};

// The 2^D - 1 fan domains canceling the simplex complement. For even D the
// arrangement cells pair up exactly; for odd D a parity obstruction leaves
// one cell uncovered (reported via *uncovered), which the mismatch report
// carries downstream.
std::vector<FanDomain> wide_fan_domains(int D, int* uncovered = nullptr);

struct TransformReport {
    int M = 0;
    std::string mode;
    TransformParams params;
    StructureMetrics metrics;
    double max_residual = 0.0;
    double mismatch_budget = 0.0;  // absolute measure, summed over pieces
    double max_exact_error = 0.0;  // univariate path only
    int dropped_cells = 0;
    double dropped_area = 0.0;
    int uncovered_cells = 0;
    bool mu_overridden = false;
    bool mu_over_budget = false;
};

std::string report_to_json(const TransformReport& r);

struct TransformResult {
    Network net;
    TransformReport report;
};

// Full pipeline: univariate networks take the exact path; D=2 networks go
// through region enumeration and triangulation; D>2 requires a caller
// supplied cover (transform_cover). The per-piece budget is delta / M.
TransformResult transform(const Network& net, TransformTask task, double delta,
                          double B, uint64_t seed,
                          std::optional<double> mu_override = std::nullopt);

TransformResult transform_cover(const SimplicialCover& cover, TransformTask task,
                                double delta, double B,
                                std::optional<double> mu_override = std::nullopt);

// Wide/deep form of an explicitly given univariate function (exact path).
TransformResult transform_pwl(const PwlFunction1D& f, TransformTask task);

}  // namespace netmorph

#endif
