#include "netmorph/linalg.hpp"

#include <cmath>
#include <cstdlib>

#include "netmorph/errors.hpp"

namespace netmorph {

std::vector<double> mat_vec(const Mat& m, std::span<const double> x) {
    std::vector<double> y(m.rows, 0.0);
    for (int i = 0; i < m.rows; ++i) {
        double s = 0.0;
        for (int j = 0; j < m.cols; ++j) s += m(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

bool solve_inplace(Mat a, std::vector<double> b, std::vector<double>& x, double pivot_eps) {
    const int n = a.rows;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
        if (std::abs(a(pivot, col)) <= pivot_eps) return false;
        if (pivot != col) {
            for (int j = col; j < n; ++j) std::swap(a(pivot, j), a(col, j));
            std::swap(b[pivot], b[col]);
        }
        for (int r = col + 1; r < n; ++r) {
            const double f = a(r, col) / a(col, col);
            if (f == 0.0) continue;
            for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
            b[r] -= f * b[col];
        }
    }
    x.assign(n, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return true;
}

bool invert(const Mat& m, Mat& out, double pivot_eps) {
    const int n = m.rows;
    out = Mat(n, n);
    std::vector<double> e(n, 0.0), col;
    for (int j = 0; j < n; ++j) {
        e.assign(n, 0.0);
        e[j] = 1.0;
        if (!solve_inplace(m, e, col, pivot_eps)) return false;
        for (int i = 0; i < n; ++i) out(i, j) = col[i];
    }
    return true;
}

double det(const Mat& m) {
    Mat a = m;
    const int n = a.rows;
    double d = 1.0;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
        if (a(pivot, col) == 0.0) return 0.0;
        if (pivot != col) {
            for (int j = col; j < n; ++j) std::swap(a(pivot, j), a(col, j));
            d = -d;
        }
        d *= a(col, col);
        for (int r = col + 1; r < n; ++r) {
            const double f = a(r, col) / a(col, col);
            for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
        }
    }
    return d;
}

BasisSolve solve_basis(Mat matrix, std::vector<double> rhs) {
    BasisSolve s;
    s.matrix = matrix;
    s.rhs = rhs;
    if (!solve_inplace(matrix, rhs, s.solution))
        throw input_error("singular basis system");
    // Two rounds of iterative refinement; the perturbation systems are
    // ill-conditioned by design (eta/nu/tau-scale pivots) and refinement
    // brings the residual down to rounding level.
    const int n = matrix.rows;
    for (int pass = 0; pass < 2; ++pass) {
        auto back = mat_vec(s.matrix, s.solution);
        std::vector<double> resid(n), corr;
        for (int i = 0; i < n; ++i) resid[i] = s.rhs[i] - back[i];
        if (!solve_inplace(s.matrix, resid, corr)) break;
        for (int i = 0; i < n; ++i) s.solution[i] += corr[i];
    }
    const auto back = mat_vec(s.matrix, s.solution);
    double r2 = 0.0;
    for (size_t i = 0; i < back.size(); ++i) {
        const double d = back[i] - s.rhs[i];
        r2 += d * d;
    }
    s.residual = std::sqrt(r2);
    return s;
}

}  // namespace netmorph
