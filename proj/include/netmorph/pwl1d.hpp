#ifndef NETMORPH_PWL1D_HPP
#define NETMORPH_PWL1D_HPP

#include <string>
#include <vector>

#include "netmorph/network.hpp"

namespace netmorph {

// Pieces with a slope delta at or below this are fused; below it the deep
// recursion divides by a near-zero slope difference.
constexpr double kSlopeMergeTol = 1e-9;

// Continuous piecewise-linear function on [-B, B], stored as breakpoints
// x0=-B < ... < x_{n+1}=B, the anchor value f(x0), and one slope per piece.
struct PwlFunction1D {
    double B = 1.0;
    std::vector<double> breakpoints;  // includes both endpoints
    double anchor = 0.0;
    std::vector<double> slopes;  // size = breakpoints.size() - 1

    int piece_count() const { return static_cast<int>(slopes.size()); }
    double evaluate(double x) const;
    // f at every breakpoint, accumulated from the anchor.
    std::vector<double> knot_values() const;
    void validate() const;
};

// Exact piecewise-linear form of a univariate network on [-B, B], by
// analytic propagation: every neuron preactivation is itself PWL, each ReLU
// inserts its zero crossings as breakpoints. ReLU and Identity activations
// are supported; BinaryStep is refused. Pieces whose slopes agree within
// kSlopeMergeTol are fused.
PwlFunction1D extract_pwl(const Network& net, double B);

// Eq-style wide form: f(x0) + sum_i (w_i - w_{i-1}) relu(x - x_i), one
// neuron per piece. Width n+1, depth 2, exact.
Network build_wide(const PwlFunction1D& f);

// One-neuron-wide recursive chain R_{i+1} = relu(|dw_{i+1}|(R_i/|dw_i| -
// x_{i+1} + x_i)), aggregated with signs at the readout. Depth n+2, exact.
// Throws input_error when a slope delta is within kSlopeMergeTol.
Network build_deep(const PwlFunction1D& f);

// Document form: {"B":..,"breakpoints":[..],"slopes":[..],"anchor":..}
std::string serialize_pwl(const PwlFunction1D& f);
PwlFunction1D deserialize_pwl(const std::string& text);
PwlFunction1D load_pwl(const std::string& path);
void save_pwl(const PwlFunction1D& f, const std::string& path);

}  // namespace netmorph

#endif
