#ifndef RLRA_TYPES_HPP
#define RLRA_TYPES_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace rlra {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Coordinate-format sparse matrix. Entries are kept sorted by (row, col)
/// with duplicates merged, so traversal order is canonical.
struct SparseMatrix {
    Index rows = 0;
    Index cols = 0;
    struct Entry {
        Index row;
        Index col;
        double value;
    };
    std::vector<Entry> entries;

    Index nnz() const { return static_cast<Index>(entries.size()); }

    static SparseMatrix from_dense(const Matrix& A, double drop_tol = 0.0);
    Matrix to_dense() const;

    // Sorts by (row, col), merges duplicates, drops explicit zeros.
    void canonicalize();
};

}  // namespace rlra

#endif
