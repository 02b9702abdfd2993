#ifndef RLRA_LINALG_HPP
#define RLRA_LINALG_HPP

#include "rlra/types.hpp"

namespace rlra {

struct SvdResult {
    Matrix left_vectors;     // orthonormal columns
    Vector singular_values;  // non-increasing, non-negative
    Matrix right_vectors;    // orthonormal columns
};

/// Thin SVD.
SvdResult svd(const Matrix& A);

/// Best rank-k approximation of A in Frobenius norm.
/// Throws std::invalid_argument on non-finite entries or k < 1.
Matrix svd_truncate(const Matrix& A, Index k);

/// Moore-Penrose pseudoinverse. Singular values below rank_tol * sigma_max
/// are treated as zero; rank_tol < 0 selects max(rows,cols) * eps.
Matrix pinv(const Matrix& A, double rank_tol = -1.0);

/// argmin over rank-k X of ||A - B X C||_F, computed as
/// B^+ (U_B U_B^T A V_C V_C^T)_k C^+ with U_B, V_C the singular bases of B, C.
Matrix rank_constrained_solve(const Matrix& A, const Matrix& B, const Matrix& C, Index k);

/// (sum_ij |A_ij|^p)^(1/p) for p in [1,2]; p = 2 is the Frobenius norm.
double entrywise_norm(const Matrix& A, double p);

inline double frobenius_norm(const Matrix& A) { return A.norm(); }

/// Throws std::invalid_argument naming `what` if A has a NaN/Inf entry.
void require_finite(const Matrix& A, const char* what);

}  // namespace rlra

#endif
