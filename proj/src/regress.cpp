#include "netmorph/regress.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "netmorph/errors.hpp"
#include "netmorph/fanshape.hpp"
#include "netmorph/pwl1d.hpp"

namespace netmorph {

namespace {

constexpr double kResidualTol = 1e-8;

AffineFunctional negate(const AffineFunctional& f) {
    AffineFunctional g = f;
    for (double& v : g.p) v = -v;
    g.r = -g.r;
    return g;
}

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

void check_residual(const BasisSolve& s) {
    double n2 = 0.0;
    for (double v : s.rhs) n2 += v * v;
    if (s.residual > kResidualTol * std::sqrt(n2))
        throw std::logic_error("cancellation system residual above tolerance");
}

// relu chain F_{j+1} = relu(F_j - mu^{j+1} * S * relu(guard_j)). S rescales
// the guards so the slack wedge width stays at 1/mu^j regardless of the
// payload's range over the box.
int build_chain(NetworkBuilder& b, const AffineFunctional& payload,
                std::span<const AffineFunctional> guards, double mu, double S) {
    int chain = -1;
    for (size_t j = 0; j < guards.size(); ++j) {
        const int gid = b.add_neuron(Activation::Relu, guards[j].r,
                                     functional_terms(guards[j]));
        if (j == 0) {
            auto in = functional_terms(payload);
            in.push_back(Term{gid, -mu * S});
            chain = b.add_neuron(Activation::Relu, payload.r, std::move(in));
        } else {
            chain = b.add_neuron(
                Activation::Relu, 0.0,
                {Term{chain, 1.0},
                 Term{gid, -mu_power(mu, static_cast<int>(j) + 1) * S}});
        }
    }
    if (chain < 0)
        chain = b.add_neuron(Activation::Relu, payload.r, functional_terms(payload));
    return chain;
}

// --- fan-domain pairing --------------------------------------------------

using Cell = std::vector<int8_t>;

int plus_count(const Cell& c) {
    int n = 0;
    for (int8_t s : c)
        if (s > 0) n++;
    return n;
}

// Kuhn's augmenting-path matching.
struct Matcher {
    std::vector<std::vector<int>> adj;  // left -> right neighbors
    std::vector<int> match_left, match_right;
    std::vector<char> used;

    bool augment(int u) {
        for (int v : adj[u]) {
            if (used[v]) continue;
            used[v] = 1;
            if (match_right[v] < 0 || augment(match_right[v])) {
                match_left[u] = v;
                match_right[v] = u;
                return true;
            }
        }
        return false;
    }

    int run(int left_n, int right_n) {
        match_left.assign(left_n, -1);
        match_right.assign(right_n, -1);
        int size = 0;
        for (int u = 0; u < left_n; ++u) {
            used.assign(right_n, 0);
            if (augment(u)) size++;
        }
        return size;
    }
};

}  // namespace

std::vector<FanDomain> wide_fan_domains(int D, int* uncovered) {
    if (uncovered) *uncovered = 0;
    if (D == 2) {
        // The three domains of the 2D proof: (v,-,+), (+,v,-), (-,+,v).
        std::vector<FanDomain> out;
        out.push_back(FanDomain{0, {0, -1, +1}});
        out.push_back(FanDomain{1, {+1, 0, -1}});
        out.push_back(FanDomain{2, {-1, +1, 0}});
        return out;
    }

    const int n = D + 1;
    const int total = 1 << n;
    const int full = total - 1;
    auto to_cell = [&](int mask) {
        Cell c(n);
        for (int i = 0; i < n; ++i) c[i] = (mask >> i) & 1 ? +1 : -1;
        return c;
    };

    std::vector<int> cells;  // masks of real cells, lexicographic
    for (int m = 1; m < full; ++m) cells.push_back(m);

    // For odd D both removed cells (simplex and empty) share a parity class,
    // so a perfect single-flip pairing cannot exist. Reserve one weight-1
    // cell to pair with the empty cell and sacrifice a second one; the
    // remainder pairs up exactly.
    std::vector<int> empty_paired, uncovered_cells;
    if (D % 2 == 1) {
        empty_paired.push_back(1 << 0);
        uncovered_cells.push_back(1 << 1);
    }
    std::vector<char> excluded(total, 0);
    for (int m : empty_paired) excluded[m] = 1;
    for (int m : uncovered_cells) excluded[m] = 1;

    std::vector<int> left, right;  // odd / even popcount
    std::vector<int> side_index(total, -1);
    for (int m : cells) {
        if (excluded[m]) continue;
        if (__builtin_popcount(static_cast<unsigned>(m)) % 2 == 1) {
            side_index[m] = static_cast<int>(left.size());
            left.push_back(m);
        } else {
            side_index[m] = static_cast<int>(right.size());
            right.push_back(m);
        }
    }
    Matcher mt;
    mt.adj.resize(left.size());
    for (size_t u = 0; u < left.size(); ++u)
        for (int i = 0; i < n; ++i) {
            const int v = left[u] ^ (1 << i);
            if (v <= 0 || v >= full || excluded[v]) continue;
            if (side_index[v] >= 0 &&
                __builtin_popcount(static_cast<unsigned>(v)) % 2 == 0)
                mt.adj[u].push_back(side_index[v]);
        }
    mt.run(static_cast<int>(left.size()), static_cast<int>(right.size()));

    std::vector<FanDomain> out;
    for (size_t u = 0; u < left.size(); ++u) {
        if (mt.match_left[u] < 0) {
            uncovered_cells.push_back(left[u]);
            continue;
        }
        const int a = left[u];
        const int bmask = right[mt.match_left[u]];
        const int diff = a ^ bmask;
        FanDomain dom;
        dom.excluded = __builtin_ctz(static_cast<unsigned>(diff));
        dom.sign = to_cell(a);
        dom.sign[dom.excluded] = 0;
        out.push_back(std::move(dom));
    }
    for (size_t v = 0; v < right.size(); ++v)
        if (mt.match_right[v] < 0) uncovered_cells.push_back(right[v]);
    for (int m : empty_paired) {
        FanDomain dom;
        dom.excluded = __builtin_ctz(static_cast<unsigned>(m));
        dom.sign = to_cell(0);  // all minus
        dom.sign[dom.excluded] = 0;
        out.push_back(std::move(dom));
    }
    if (uncovered) *uncovered = static_cast<int>(uncovered_cells.size());

    std::sort(out.begin(), out.end(), [](const FanDomain& a, const FanDomain& b) {
        if (a.excluded != b.excluded) return a.excluded < b.excluded;
        return a.sign < b.sign;
    });
    return out;
}

// --- parameter selection ---------------------------------------------------

TransformParams choose_params(TransformTask task, int D, double B, double delta) {
    if (delta <= 0.0) throw input_error("choose_params: delta must be positive");
    if (B <= 0.0) throw input_error("choose_params: B must be positive");
    if (D < 2 || D > 8)
        throw unsupported_error("choose_params: D must lie in [2, 8] (D=1 is the exact path)");

    double bound;
    if (D == 2) {
        const double s = 2.0 * std::sqrt(2.0) * B;
        bound = task == TransformTask::Wide ? delta / (15.0 * s) : delta / (11.0 * s);
    } else {
        const double C = hyperplane_area_bound(D, B);
        bound = task == TransformTask::Wide
                    ? delta / ((std::pow(2.0, D) - 1.0) * C * (2.0 * D + 1.0))
                    : delta / (C * (2.0 * D * D + 3.0 * D));
    }

    TransformParams p;
    p.delta = delta;
    p.B = B;
    const double half = bound / 2.0;
    const double mu = D == 2 ? 1.0 / half : 1.0 + 1.0 / half;
    if (mu > kMuPowerCap) {
        const double min_delta = delta * (mu / kMuPowerCap);
        throw infeasible_error(
            "choose_params: delta " + std::to_string(delta) +
                " requires mu beyond the cap; smallest achievable delta is about " +
                std::to_string(min_delta),
            min_delta);
    }
    p.mu = std::max(mu, 4.0);
    p.eta = half;
    p.nu = half;
    p.tau = half;
    return p;
}

double wide_piece_budget(int D, double B, const TransformParams& p) {
    if (D == 2)
        return 2.0 * std::sqrt(2.0) * B * (6.0 * p.eta + 9.0 / p.mu);
    const double C = hyperplane_area_bound(D, B);
    return (std::pow(2.0, D) - 1.0) * C * (D * p.eta + (D + 1.0) / (p.mu - 1.0));
}

double deep_piece_budget(int D, double B, const TransformParams& p) {
    if (D == 2)
        return 2.0 * std::sqrt(2.0) * B * (3.0 * p.nu + 2.0 * p.tau + 6.0 / p.mu);
    const double C = hyperplane_area_bound(D, B);
    return C * (D * (D + 1.0) / (p.mu - 1.0) + (D + 1.0) * (D - 1.0) * p.nu +
                D * p.tau);
}

// --- cancellation systems ----------------------------------------------------

BasisSolve wide_cancellation_system(const AffineFunctional& payload, int skip_coord,
                                    double eta, std::span<const double> a, double b) {
    const int D = static_cast<int>(payload.p.size());
    Mat A(D + 1, D + 1);
    int col = 1;
    std::vector<int> coords;
    for (int j = 0; j < D; ++j)
        if (j != skip_coord) coords.push_back(j);
    for (int k = 0; k <= D; ++k) {
        for (int j = 0; j < D; ++j) A(j, k) = payload.p[j];
        A(D, k) = payload.r;
    }
    for (size_t i = 0; i < coords.size(); ++i, ++col) A(coords[i], col) -= eta;
    A(D, D) -= eta;
    std::vector<double> rhs(D + 1);
    for (int j = 0; j < D; ++j) rhs[j] = -a[j];
    rhs[D] = -b;
    BasisSolve s = solve_basis(std::move(A), std::move(rhs));
    check_residual(s);
    return s;
}

BasisSolve deep_gamma_system(int D, double nu, std::span<const double> target_p,
                             double target_r) {
    // Columns: D payloads x0 - nu_k x_k (nu_0 = 0, perturbing every
    // coordinate but x0), then the constant.
    Mat A(D + 1, D + 1);
    for (int k = 0; k < D; ++k) A(0, k) = 1.0;
    for (int k = 1; k < D; ++k) A(k, k) = -nu;
    A(D, D) = 1.0;
    std::vector<double> rhs(D + 1);
    for (int j = 0; j < D; ++j) rhs[j] = target_p[j];
    rhs[D] = target_r;
    BasisSolve s = solve_basis(std::move(A), std::move(rhs));
    check_residual(s);
    return s;
}

BasisSolve deep_rho_system(int D, double tau, std::span<const double> a, double b) {
    Mat A(D + 1, D + 1);
    for (int l = 0; l <= D; ++l) {
        for (int j = 0; j < D; ++j) A(j, l) = -1.0;
        A(D, l) = 1.0;
        if (l >= 1) A(l - 1, l) -= tau;
    }
    std::vector<double> rhs(D + 1);
    for (int j = 0; j < D; ++j) rhs[j] = a[j];
    rhs[D] = b;
    BasisSolve s = solve_basis(std::move(A), std::move(rhs));
    check_residual(s);
    return s;
}

// --- per-piece builders ------------------------------------------------------

namespace {

struct BuildStats {
    double max_residual = 0.0;
    int uncovered = 0;
};

void note(BuildStats* st, const BasisSolve& s) {
    if (st) st->max_residual = std::max(st->max_residual, s.residual);
}

Network build_wide_piece_impl(const LinearPiece& piece, const TransformParams& pr,
                              BuildStats* stats) {
    const int D = piece.simplex.dim();
    if (D < 2 || D > 8) throw unsupported_error("wide piece builder: D must lie in [2, 8]");
    if (static_cast<int>(piece.a.size()) != D)
        throw input_error("piece payload dimension mismatch");
    const auto faces = face_functionals(piece.simplex);
    int uncovered = 0;
    const auto domains = wide_fan_domains(D, &uncovered);
    if (stats) stats->uncovered = uncovered;
    const double coord_scale = std::max(1.0, pr.B);

    NetworkBuilder b(D);
    AffineFunctional ftilde{piece.a, piece.b};
    const int pos = b.add_neuron(Activation::Relu, ftilde.r, functional_terms(ftilde));
    const AffineFunctional fneg = negate(ftilde);
    const int neg = b.add_neuron(Activation::Relu, fneg.r, functional_terms(fneg));
    std::vector<Term> out{Term{pos, 1.0}, Term{neg, -1.0}};

    for (const FanDomain& dom : domains) {
        int i0 = -1;
        for (int i = 0; i <= D; ++i)
            if (i != dom.excluded && dom.sign[i] > 0) {
                i0 = i;
                break;
            }
        bool negated = false;
        if (i0 < 0) {
            for (int i = 0; i <= D; ++i)
                if (i != dom.excluded) {
                    i0 = i;
                    break;
                }
            negated = true;
        }
        const AffineFunctional h1 = negated ? negate(faces[i0]) : faces[i0];
        std::vector<AffineFunctional> guards;
        for (int i = 0; i <= D; ++i) {
            if (i == dom.excluded || i == i0) continue;
            guards.push_back(dom.sign[i] < 0 ? faces[i] : negate(faces[i]));
        }
        int jstar = 0;
        for (int j = 1; j < D; ++j)
            if (std::abs(h1.p[j]) > std::abs(h1.p[jstar])) jstar = j;

        const BasisSolve sol =
            wide_cancellation_system(h1, jstar, pr.eta / coord_scale, piece.a, piece.b);
        note(stats, sol);

        const double S = std::max(1.0, sup_box(h1, pr.B));
        std::vector<int> coords;
        for (int j = 0; j < D; ++j)
            if (j != jstar) coords.push_back(j);
        for (int k = 0; k <= D; ++k) {
            AffineFunctional payload = h1;
            if (k >= 1 && k < D) payload.p[coords[k - 1]] -= pr.eta / coord_scale;
            if (k == D) payload.r -= pr.eta / coord_scale;
            const int chain = build_chain(b, payload, guards, pr.mu, S);
            out.push_back(Term{chain, sol.solution[k]});
        }
    }
    b.set_output(0.0, std::move(out));
    return std::move(b).build();
}

// One deep block realizes relu(t_l) cut out of the fan domain
// Q = faces_1+ ∩ ... ∩ faces_{D-1}+ as follows: the lead fan carries
// -faces_0 and enters the gamma neuron with a large negative weight (a soft
// guard for the remaining face of Q), the second fan carries the target
// shifted up by Lambda at nu-scale, and the shift returns through a negative
// gamma-neuron bias, which cannot leak outside Q since relu(-Lambda) = 0.
// Keeping the target at nu-scale inside the carrier keeps every product in
// the gamma neuron at box scale; the literal per-fan payload basis multiplies
// rounding noise by 1/(nu*tau), which drowns the transform-level parameter
// choices in float64.
Network build_deep_piece_impl(const LinearPiece& piece, const TransformParams& pr,
                              BuildStats* stats) {
    const int D = piece.simplex.dim();
    if (D < 2 || D > 8) throw unsupported_error("deep piece builder: D must lie in [2, 8]");
    if (static_cast<int>(piece.a.size()) != D)
        throw input_error("piece payload dimension mismatch");
    const auto faces = face_functionals(piece.simplex);
    const double coord_scale = std::max(1.0, pr.B);
    const double scaled_tau = pr.tau / coord_scale;
    const double nu = pr.nu;

    // Block targets: the far face, its tau-tilts along every coordinate but
    // the strongest one, and one tau-shift of the constant (so the system
    // stays regular when the far face passes through the origin).
    int jstar2 = 0;
    for (int j = 1; j < D; ++j)
        if (std::abs(faces[D].p[j]) > std::abs(faces[D].p[jstar2])) jstar2 = j;
    std::vector<AffineFunctional> targets(D + 1, faces[D]);
    {
        int l = 1;
        for (int j = 0; j < D; ++j) {
            if (j == jstar2) continue;
            targets[l++].p[j] -= scaled_tau;
        }
        targets[D].r -= pr.tau;
    }

    // rho solves sum_l rho_l target_l = a.x + b.
    Mat R(D + 1, D + 1);
    for (int l = 0; l <= D; ++l) {
        for (int j = 0; j < D; ++j) R(j, l) = targets[l].p[j];
        R(D, l) = targets[l].r;
    }
    std::vector<double> rrhs(piece.a.begin(), piece.a.end());
    rrhs.push_back(piece.b);
    const BasisSolve rho = solve_basis(std::move(R), std::move(rrhs));
    check_residual(rho);
    note(stats, rho);

    std::vector<AffineFunctional> guards;
    for (int j = 1; j < D; ++j) guards.push_back(negate(faces[j]));
    const AffineFunctional lead = negate(faces[0]);

    // Filler coordinates for the structural fans (D >= 3).
    std::vector<int> coords;
    for (int j = 0; j < D; ++j)
        if (j != jstar2) coords.push_back(j);

    NetworkBuilder b(D);
    std::vector<Term> out;
    for (int l = 0; l <= D; ++l) {
        const AffineFunctional& t = targets[l];
        double lambda = 1.0;
        for (const auto& v : piece.simplex.vertices) lambda = std::max(lambda, std::abs(t(v)));
        lambda += 1.0;
        double t_sup = std::abs(t.r);
        for (double pc : t.p) t_sup += std::abs(pc) * pr.B;
        t_sup = std::max(1.0, t_sup);

        std::vector<Term> gterms;
        // lead fan: soft guard for faces_0
        const double lead_scale = std::max(1.0, sup_box(lead, pr.B));
        gterms.push_back(Term{build_chain(b, lead, guards, pr.mu, lead_scale),
                              -pr.mu * t_sup});
        // carrier fan: nu * (t + lambda)
        AffineFunctional carrier;
        carrier.p.resize(D);
        for (int j = 0; j < D; ++j) carrier.p[j] = nu * t.p[j];
        carrier.r = nu * (t.r + lambda);
        const double carrier_scale = std::max(1.0, sup_box(carrier, pr.B));
        gterms.push_back(Term{build_chain(b, carrier, guards, pr.mu, carrier_scale),
                              1.0 / nu});
        // structural fans keep the stated width; they never fire into the sum
        for (int k = 2; k < D; ++k) {
            AffineFunctional filler;
            filler.p.assign(D, 0.0);
            filler.p[coords[k - 1]] = -nu / coord_scale;
            filler.r = 2.0 * nu;
            gterms.push_back(Term{build_chain(b, filler, guards, pr.mu, 1.0), 0.0});
        }
        const int gneuron = b.add_neuron(Activation::Relu, -lambda, std::move(gterms));
        out.push_back(Term{gneuron, rho.solution[l]});
    }
    b.set_output(0.0, std::move(out));
    return std::move(b).build();
}

}  // namespace

Network build_wide_piece_2d(const LinearPiece& piece, const TransformParams& params) {
    if (piece.simplex.dim() != 2) throw input_error("build_wide_piece_2d: D must be 2");
    return build_wide_piece_impl(piece, params, nullptr);
}

Network build_deep_piece_2d(const LinearPiece& piece, const TransformParams& params) {
    if (piece.simplex.dim() != 2) throw input_error("build_deep_piece_2d: D must be 2");
    return build_deep_piece_impl(piece, params, nullptr);
}

Network build_wide_piece_nd(const LinearPiece& piece, const TransformParams& params) {
    return build_wide_piece_impl(piece, params, nullptr);
}

Network build_deep_piece_nd(const LinearPiece& piece, const TransformParams& params) {
    return build_deep_piece_impl(piece, params, nullptr);
}

// --- whole-network transforms -------------------------------------------------

namespace {

TransformResult transform_pieces(std::vector<LinearPiece> pieces, int D,
                                 TransformTask task, double delta, double B,
                                 std::optional<double> mu_override) {
    if (pieces.empty()) throw input_error("transform: empty cover");
    const int M = static_cast<int>(pieces.size());

    TransformReport rep;
    rep.M = M;
    rep.mode = task == TransformTask::Wide ? "wide" : "deep";

    TransformParams params;
    bool over_budget = false;
    if (mu_override) {
        params.mu = *mu_override;
        if (params.mu < 2.0) throw input_error("mu override must be at least 2");
        params.eta = params.nu = params.tau = 1.0 / params.mu;
        params.delta = delta;
        params.B = B;
        try {
            const TransformParams want = choose_params(task, D, B, delta / M);
            over_budget = params.mu < want.mu || params.eta > want.eta;
        } catch (const infeasible_error&) {
            over_budget = true;
        }
        rep.mu_overridden = true;
    } else {
        params = choose_params(task, D, B, delta / M);
    }
    rep.mu_over_budget = over_budget;
    rep.params = params;

    BuildStats stats;
    std::vector<Network> nets;
    nets.reserve(pieces.size());
    for (const LinearPiece& piece : pieces) {
        nets.push_back(task == TransformTask::Wide
                           ? build_wide_piece_impl(piece, params, &stats)
                           : build_deep_piece_impl(piece, params, &stats));
        rep.uncovered_cells += stats.uncovered;
        stats.uncovered = 0;
    }
    rep.max_residual = stats.max_residual;
    const double per_budget = task == TransformTask::Wide
                                  ? wide_piece_budget(D, B, params)
                                  : deep_piece_budget(D, B, params);
    rep.mismatch_budget = per_budget * M;

    Network out = task == TransformTask::Wide
                      ? compose_sum(nets, std::vector<double>(nets.size(), 1.0), 0.0)
                      : compose_stack(nets);
    rep.metrics = out.metrics();
    return TransformResult{std::move(out), std::move(rep)};
}

TransformResult transform_univariate(const PwlFunction1D& f, TransformTask task,
                                     const Network* source) {
    Network out = task == TransformTask::Wide ? build_wide(f) : build_deep(f);
    TransformReport rep;
    rep.M = f.piece_count();
    rep.mode = task == TransformTask::Wide ? "wide" : "deep";
    rep.metrics = out.metrics();
    double err = 0.0;
    const int grid = 10000;
    for (int i = 0; i <= grid; ++i) {
        const double x = -f.B + 2.0 * f.B * i / grid;
        const double want = source ? source->evaluate1(x) : f.evaluate(x);
        err = std::max(err, std::abs(out.evaluate1(x) - want));
    }
    for (double x : f.breakpoints) {
        const double want = source ? source->evaluate1(x) : f.evaluate(x);
        err = std::max(err, std::abs(out.evaluate1(x) - want));
    }
    rep.max_exact_error = err;
    return TransformResult{std::move(out), std::move(rep)};
}

}  // namespace

TransformResult transform(const Network& net, TransformTask task, double delta,
                          double B, uint64_t seed, std::optional<double> mu_override) {
    if (B <= 0.0) throw input_error("transform: B must be positive");
    if (net.input_dim() == 1) {
        const PwlFunction1D f = extract_pwl(net, B);
        return transform_univariate(f, task, &net);
    }
    if (net.input_dim() == 2) {
        if (delta <= 0.0) throw input_error("transform: delta must be positive");
        const RegionEnumeration re = enumerate_regions_2d(net, B, seed);
        std::vector<LinearPiece> pieces;
        for (const Region2& r : re.regions) {
            auto tris = triangulate(r.poly, r.a, r.b);
            for (auto& t : tris) pieces.push_back(std::move(t));
        }
        TransformResult res =
            transform_pieces(std::move(pieces), 2, task, delta, B, mu_override);
        res.report.dropped_cells = re.dropped_cells;
        res.report.dropped_area = re.dropped_area;
        return res;
    }
    throw unsupported_error(
        "transform: region enumeration covers D <= 2; supply a simplicial cover");
}

TransformResult transform_cover(const SimplicialCover& cover, TransformTask task,
                                double delta, double B,
                                std::optional<double> mu_override) {
    if (delta <= 0.0) throw input_error("transform: delta must be positive");
    return transform_pieces(cover.pieces, cover.D, task, delta, B, mu_override);
}

TransformResult transform_pwl(const PwlFunction1D& f, TransformTask task) {
    return transform_univariate(f, task, nullptr);
}

std::string report_to_json(const TransformReport& r) {
    nlohmann::json j;
    j["M"] = r.M;
    j["mode"] = r.mode;
    j["params"] = {{"mu", r.params.mu}, {"eta", r.params.eta}, {"nu", r.params.nu},
                   {"tau", r.params.tau}, {"delta", r.params.delta}, {"B", r.params.B}};
    j["width"] = r.metrics.width;
    j["depth"] = r.metrics.depth;
    j["neuron_count"] = r.metrics.neuron_count;
    j["parameter_count"] = r.metrics.parameter_count;
    j["max_residual"] = r.max_residual;
    j["mismatch_budget"] = r.mismatch_budget;
    j["max_exact_error"] = r.max_exact_error;
    j["dropped_cells"] = r.dropped_cells;
    j["dropped_area"] = r.dropped_area;
    j["uncovered_cells"] = r.uncovered_cells;
    j["mu_overridden"] = r.mu_overridden;
    j["mu_over_budget"] = r.mu_over_budget;
    return j.dump(2);
}

}  // namespace netmorph
