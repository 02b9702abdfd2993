#ifndef RLRA_SKETCH_HPP
#define RLRA_SKETCH_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "rlra/rng.hpp"
#include "rlra/types.hpp"

namespace rlra {

enum class SketchKind { dense_stable, sparse_stable, lewis_sampling };

/// Role tags separating the random streams of the sketches a pipeline draws
/// from one seed. Streaming, distributed and batch code share these so that
/// matched seeds produce matched sketches.
namespace tags {
constexpr uint64_t kS = 1;       // left sketch of the input
constexpr uint64_t kR = 2;       // right sketch
constexpr uint64_t kT1 = 3;      // left core sketch
constexpr uint64_t kT2 = 4;      // right core sketch
constexpr uint64_t kSprime = 5;  // row-fit sketch (stage 1 / per-machine)
constexpr uint64_t kS2 = 6;      // stage-2 left sketch
constexpr uint64_t kR2 = 7;      // stage-2 right sketch
constexpr uint64_t kT1b = 8;     // stage-2 left core sketch
constexpr uint64_t kT2b = 9;     // stage-2 right core sketch
constexpr uint64_t kSampler = 10;
}  // namespace tags

struct SketchSpec {
    SketchKind kind = SketchKind::dense_stable;
    Index rows = 0;      // m
    double p = 1.0;      // stability index; p = 1 is Cauchy
    double scale = 1.0;  // sigma
    int w = 0;           // 0: fully independent; w >= 2: w-wise per row
    uint64_t seed = 0;

    void validate() const;
};

/// Deterministic generator for an m x n dense p-stable sketch.
/// Entries are a pure function of (seed, tag, row, col). With w >= 2 each row
/// is produced by a pair of degree-(w-1) polynomial hashes, so entries within
/// a row are w-wise independent while rows stay fully independent.
class DenseSketchGen {
  public:
    DenseSketchGen(const SketchSpec& spec, uint64_t tag);

    double entry(Index r, Index c) const;
    Vector column(Index c) const;  // m entries at input coordinate c
    Matrix materialize(Index n) const;

    Index rows() const { return spec_.rows; }
    const SketchSpec& spec() const { return spec_; }

  private:
    SketchSpec spec_;
    uint64_t tag_;
    // one (u1, u2) hash pair per row when w-wise
    std::vector<rng::PolyHash> hash_u1_, hash_u2_;
};

Matrix make_dense_sketch(const SketchSpec& spec, Index n, uint64_t tag = 0);

/// One nonzero per column: bucket row index + stable variate.
struct SparseSketch {
    Index m = 0;
    Index n = 0;
    std::vector<Index> bucket;  // size n
    std::vector<double> value;  // size n, unscaled variates
    double scale = 1.0;

    Matrix densify() const;
};

SparseSketch make_sparse_sketch(const SketchSpec& spec, Index n, uint64_t tag = 0);

/// Pi * A touching each stored entry of A exactly once.
Matrix apply_sparse(const SparseSketch& pi, const Matrix& A);
Matrix apply_sparse(const SparseSketch& pi, const SparseMatrix& A);

/// A row of n variates whose uniform stage is w-wise independent.
Vector limited_indep_row(uint64_t seed, int w, Index n, double p);

struct LewisState {
    Vector weights;
    double p = 1.0;
    double fixed_point_residual = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> residual_history;
};

/// Lewis weights of A (rows >= cols) by the contractive fixed-point
/// iteration w_i <- (a_i^T (A^T W^{1-2/p} A)^{-1} a_i)^{p/2}.
/// max_iters < 0 selects ceil(log2(rows)) + 16. On non-convergence the best
/// iterate is returned with converged = false.
LewisState lewis_weights(const Matrix& A, double p, int max_iters = -1, double tol = 1e-8);

/// N i.i.d. rows drawn with probability proportional to the weights,
/// rescale factor (N * p_i)^(-1/p).
struct SamplingMatrix {
    std::vector<Index> selected;
    std::vector<double> rescale;
    Index N = 0;
    double p = 1.0;

    Matrix apply_rows(const Matrix& A) const;  // N x d, rescaled rows of A
    Matrix apply_cols(const Matrix& A) const;  // n x N, rescaled columns of A
};

SamplingMatrix lewis_sampler(const LewisState& state, Index N, uint64_t seed, uint64_t tag = tags::kSampler);

}  // namespace rlra

#endif
