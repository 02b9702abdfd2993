#include "rlra/types.hpp"

#include <algorithm>
#include <cmath>

namespace rlra {

SparseMatrix SparseMatrix::from_dense(const Matrix& A, double drop_tol) {
    SparseMatrix S;
    S.rows = A.rows();
    S.cols = A.cols();
    for (Index i = 0; i < A.rows(); ++i)
        for (Index j = 0; j < A.cols(); ++j)
            if (std::abs(A(i, j)) > drop_tol) S.entries.push_back({i, j, A(i, j)});
    return S;
}

Matrix SparseMatrix::to_dense() const {
    Matrix A = Matrix::Zero(rows, cols);
    for (const Entry& e : entries) A(e.row, e.col) += e.value;
    return A;
}

void SparseMatrix::canonicalize() {
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<Entry> merged;
    merged.reserve(entries.size());
    for (const Entry& e : entries) {
        if (!merged.empty() && merged.back().row == e.row && merged.back().col == e.col)
            merged.back().value += e.value;
        else
            merged.push_back(e);
    }
    std::erase_if(merged, [](const Entry& e) { return e.value == 0.0; });
    entries = std::move(merged);
}

}  // namespace rlra
