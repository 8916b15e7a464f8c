#ifndef NETMORPH_FANSHAPE_HPP
#define NETMORPH_FANSHAPE_HPP

#include "netmorph/geometry.hpp"
#include "netmorph/network.hpp"

namespace netmorph {

// Powers of mu used in the recursive chain are capped here; past the cap the
// construction still stands for desk-scale D but the extra accuracy is gone.
constexpr double kMuPowerCap = 1e12;

// Returns min(mu^j, kMuPowerCap); sets *capped when the cap bites.
double mu_power(double mu, int j, bool* capped = nullptr);

// Upper bound on the area of any hyperplane section of [-B,B]^D.
double hyperplane_area_bound(int D, double B);

// h_1, ..., h_D with linearly independent gradients; mu controls how fast
// the support collapses onto h1+ ∩ h2- ∩ ... ∩ hD-.
struct FanSpec {
    std::vector<AffineFunctional> h;
    double mu = 1e4;
    int dim() const { return h.empty() ? 0 : static_cast<int>(h[0].p.size()); }
};

// Throws input_error when the gradients are dependent (smallest singular
// value <= 1e-10) or mu < 2.
void validate_fan_spec(const FanSpec& spec);

// F(x) = relu(h1(x) - mu * relu(h2(x))); width 2, depth 2.
Network build_fan_2d(const FanSpec& spec);

// Recursive chain F_{j+1} = relu(F_j - mu^j relu(h_{j+1})); width D, depth D.
// D = 2 coincides with build_fan_2d.
Network build_fan_nd(const FanSpec& spec);

// Analytic bound on the measure where F deviates from the ideal fan
// indicator times h1: C(D,B) * sum_{j=1}^{D-1} mu^{-j}.
double slack_measure_bound(const FanSpec& spec, double B);

}  // namespace netmorph

#endif
