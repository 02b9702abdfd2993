#ifndef RLRA_IO_HPP
#define RLRA_IO_HPP

#include <string>
#include <vector>

#include "rlra/types.hpp"

namespace rlra {

/// Dense matrices travel as header-less CSV; an optional sidecar
/// <path>.meta JSON records the shape.
Matrix load_dense_csv(const std::string& path);
void save_dense_csv(const Matrix& A, const std::string& path, bool write_meta = false);

/// Coordinate text, one `i j v` triple per line, 0-based.
SparseMatrix load_coordinate(const std::string& path);
void save_coordinate(const SparseMatrix& A, const std::string& path);

struct StreamUpdate {
    Index x, y;
    double c;
};

/// Stream replay file: lines `x y c` (0-based, decimal real), `#` comments.
std::vector<StreamUpdate> load_stream(const std::string& path);

/// Fixed 17-significant-digit float formatting used by every CSV artifact.
std::string format_real(double v);

}  // namespace rlra

#endif
