#ifndef NETMORPH_LINALG_HPP
#define NETMORPH_LINALG_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace netmorph {

// Row-major dense matrix, sized for the small systems that show up here
// (n <= D+1 with D <= 8).
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

    double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

std::vector<double> mat_vec(const Mat& m, std::span<const double> x);

// Gaussian elimination with partial pivoting. Returns false when the largest
// available pivot falls to pivot_eps or below.
bool solve_inplace(Mat a, std::vector<double> b, std::vector<double>& x,
                   double pivot_eps = 0.0);

// Matrix inverse via column-by-column solves. Returns false on a singular
// matrix (pivot <= pivot_eps).
bool invert(const Mat& m, Mat& out, double pivot_eps = 0.0);

double det(const Mat& m);

// One solved linear system, kept with its residual so constructions can
// assert the solve was healthy before baking the solution into weights.
struct BasisSolve {
    Mat matrix;
    std::vector<double> rhs;
    std::vector<double> solution;
    double residual = 0.0;
};

// Solves matrix*solution = rhs and records ||matrix*solution - rhs||_2.
// Throws input_error on a singular system.
BasisSolve solve_basis(Mat matrix, std::vector<double> rhs);

}  // namespace netmorph

#endif
