#ifndef RLRA_STREAMING_HPP
#define RLRA_STREAMING_HPP

#include <optional>
#include <vector>

#include "rlra/lowrank.hpp"
#include "rlra/sketch.hpp"
#include "rlra/types.hpp"

namespace rlra {

/// Default limited-independence degree for the sketches spanning the row
/// index space (S, T1). The theory preset scales the degree with d.
int stream_indep_degree(Index d, Preset preset);

/// Linear sketch accumulators maintained under turnstile updates:
/// L = T1 A R, N = S A T2, M = T1 A T2, D = S A, C = A R (optional),
/// for the net matrix A implied by the update stream.
struct TurnstileState {
    Index n = 0, d = 0, k = 0;
    uint64_t seed = 0;
    bool decomposition = false;
    SketchSizes sz;

    DenseSketchGen genS, genT1, genR, genT2;

    Matrix L, N, M, D, C;
    uint64_t update_count = 0;

    /// Words held by the accumulators (C excluded unless requested).
    Index stored_words(bool include_C = false) const;
};

TurnstileState turnstile_init(Index n, Index d, Index k, uint64_t seed, bool want_decomposition,
                              Preset preset = Preset::practical);

void turnstile_update(TurnstileState& st, Index x, Index y, double c);

struct StreamFactors {
    Matrix Vstar;                 // k x d
    std::optional<Matrix> Ustar;  // n x k when decomposition was requested
};

StreamFactors turnstile_finalize(const TurnstileState& st);

/// Row-update variant: rows arrive once each, are buffered into blocks of
/// size max(ceil(4k log2(k+2)), 8); each block is replaced by its l1 fit onto
/// the row-fit sketch before feeding the same accumulators.
struct RowUpdateState {
    TurnstileState base;
    DenseSketchGen genSprime;
    Index block_size = 0;
    L1Options reg;
    std::vector<Index> pending_rows;
    Matrix pending;  // block_size x d buffer
    Matrix Rmat;     // d x r, materialized once
    Matrix T2mat;    // d x t2
    std::vector<bool> seen;
};

RowUpdateState rowupdate_init(Index n, Index d, Index k, uint64_t seed, bool want_decomposition,
                              Preset preset = Preset::practical);

void rowupdate_ingest(RowUpdateState& st, Index row_index, const Vector& row);

/// Flushes any partial block, then finalizes as in the turnstile model.
StreamFactors rowupdate_finalize(RowUpdateState& st);

}  // namespace rlra

#endif
