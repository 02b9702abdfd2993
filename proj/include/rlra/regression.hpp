#ifndef RLRA_REGRESSION_HPP
#define RLRA_REGRESSION_HPP

#include <vector>

#include "rlra/types.hpp"

namespace rlra {

struct RegressionResult {
    Vector x;
    double cost = 0.0;  // entrywise-p norm of the residual
    int iterations = 0;
    bool converged = false;
    std::vector<double> cost_history;
};

struct L1Options {
    double p = 1.0;
    double tol = 1e-9;
    int max_iters = 500;
};

/// min_x ||Ax - b||_p for p in [1,2), by IRLS with residual weights
/// 1/max(|r_i|, delta) (p = 1) resp. max(|r_i|, delta)^(p-2), delta annealed
/// from 1e-2 ||b||_1 / n down to 1e-10 by halving whenever the cost stalls.
RegressionResult l1_regress(const Matrix& A, const Vector& b, double p = 1.0, double tol = 1e-9,
                            int max_iters = 500);

/// Exact optimum for small instances (n <= 16, d <= 4, full column rank) by
/// enumerating all size-d row subsets and solving the interpolation system.
/// The least-squares solution is always included as a candidate.
RegressionResult l1_regress_oracle(const Matrix& A, const Vector& b);

/// Per-column least squares: U^+ A.
Matrix multi_response_l2(const Matrix& U, const Matrix& A);

/// d independent p-norm regressions, one per column of A. Returns k x d.
Matrix multi_response_l1(const Matrix& U, const Matrix& A, const L1Options& opt = {});

/// Row-oriented convenience: returns W (n x m) where row i of W minimizes
/// ||W^i V - A^i||_p. Equivalent to multi_response_l1 on the transposed pair.
Matrix fit_rows_l1(const Matrix& V, const Matrix& A, const L1Options& opt = {});

}  // namespace rlra

#endif
