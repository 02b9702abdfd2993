#include "rlra/linalg.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

namespace rlra {

void require_finite(const Matrix& A, const char* what) {
    if (!A.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite entries");
}

SvdResult svd(const Matrix& A) {
    Eigen::BDCSVD<Matrix> dec(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return SvdResult{dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

Matrix svd_truncate(const Matrix& A, Index k) {
    if (k < 1) throw std::invalid_argument("svd_truncate: k must be >= 1");
    require_finite(A, "svd_truncate");
    if (k >= std::min(A.rows(), A.cols())) return A;
    SvdResult s = svd(A);
    return s.left_vectors.leftCols(k) * s.singular_values.head(k).asDiagonal() *
           s.right_vectors.leftCols(k).transpose();
}

Matrix pinv(const Matrix& A, double rank_tol) {
    if (A.size() == 0) return Matrix::Zero(A.cols(), A.rows());
    SvdResult s = svd(A);
    const double smax = s.singular_values.size() ? s.singular_values(0) : 0.0;
    if (rank_tol < 0.0)
        rank_tol = static_cast<double>(std::max(A.rows(), A.cols())) *
                   std::numeric_limits<double>::epsilon();
    const double cut = rank_tol * smax;
    Vector inv = Vector::Zero(s.singular_values.size());
    for (Index i = 0; i < inv.size(); ++i)
        if (s.singular_values(i) > cut && s.singular_values(i) > 0.0)
            inv(i) = 1.0 / s.singular_values(i);
    return s.right_vectors * inv.asDiagonal() * s.left_vectors.transpose();
}

Matrix rank_constrained_solve(const Matrix& A, const Matrix& B, const Matrix& C, Index k) {
    if (B.rows() != A.rows() || C.cols() != A.cols())
        throw std::invalid_argument("rank_constrained_solve: incompatible shapes");
    if (k < 1 || k > std::min(B.cols(), C.rows()))
        throw std::invalid_argument("rank_constrained_solve: k out of range");

    SvdResult sb = svd(B);
    SvdResult sc = svd(C);

    // Keep only numerically nonzero directions so the projection and the
    // pseudoinverse agree on the retained subspace.
    auto rank_of = [](const SvdResult& s, Index rows, Index cols) {
        const double cut = static_cast<double>(std::max(rows, cols)) *
                           std::numeric_limits<double>::epsilon() *
                           (s.singular_values.size() ? s.singular_values(0) : 0.0);
        Index r = 0;
        while (r < s.singular_values.size() && s.singular_values(r) > cut) ++r;
        return r;
    };
    const Index rb = rank_of(sb, B.rows(), B.cols());
    const Index rc = rank_of(sc, C.rows(), C.cols());
    if (rb == 0 || rc == 0) return Matrix::Zero(B.cols(), C.rows());

    Matrix Ub = sb.left_vectors.leftCols(rb);   // n x rb
    Matrix Vc = sc.right_vectors.leftCols(rc);  // d x rc

    Matrix G = Ub.transpose() * A * Vc;  // rb x rc
    if (k < std::min(rb, rc)) G = svd_truncate(G, k);

    Matrix left = sb.right_vectors.leftCols(rb) *
                  sb.singular_values.head(rb).cwiseInverse().asDiagonal();  // p x rb = B^+ Ub
    Matrix right = sc.singular_values.head(rc).cwiseInverse().asDiagonal() *
                   sc.left_vectors.leftCols(rc).transpose();  // rc x q = Vc^T C^+
    return left * G * right;
}

double entrywise_norm(const Matrix& A, double p) {
    if (!(p >= 1.0 && p <= 2.0)) throw std::invalid_argument("entrywise_norm: p must be in [1,2]");
    if (p == 1.0) return A.cwiseAbs().sum();
    if (p == 2.0) return A.norm();
    double acc = 0.0;
    for (Index j = 0; j < A.cols(); ++j)
        for (Index i = 0; i < A.rows(); ++i) acc += std::pow(std::abs(A(i, j)), p);
    return std::pow(acc, 1.0 / p);
}

}  // namespace rlra
