#include "rlra/streaming.hpp"

#include <cmath>
#include <stdexcept>

#include "rlra/linalg.hpp"

namespace rlra {

int stream_indep_degree(Index d, Preset preset) {
    if (preset == Preset::theory) return static_cast<int>(std::max<Index>(8, d));
    return 8;
}

namespace {

TurnstileState make_state(Index n, Index d, Index k, uint64_t seed, bool want_decomposition,
                          Preset preset) {
    if (n < 1 || d < 1 || k < 1) throw std::invalid_argument("streaming: n, d, k must be >= 1");
    SketchSizes sz = preset_sizes(k, SketchKind::dense_stable, preset);
    const int w = stream_indep_degree(d, preset);

    SketchSpec specS{SketchKind::dense_stable, sz.s, 1.0, 1.0, w, seed};
    SketchSpec specT1{SketchKind::dense_stable, sz.t1, 1.0, 1.0, w, seed};
    SketchSpec specR{SketchKind::dense_stable, sz.r, 1.0, 1.0, 0, seed};
    SketchSpec specT2{SketchKind::dense_stable, sz.t2, 1.0, 1.0, 0, seed};

    TurnstileState st{n,
                      d,
                      k,
                      seed,
                      want_decomposition,
                      sz,
                      DenseSketchGen(specS, tags::kS),
                      DenseSketchGen(specT1, tags::kT1),
                      DenseSketchGen(specR, tags::kR),
                      DenseSketchGen(specT2, tags::kT2),
                      Matrix::Zero(sz.t1, sz.r),
                      Matrix::Zero(sz.s, sz.t2),
                      Matrix::Zero(sz.t1, sz.t2),
                      Matrix::Zero(sz.s, d),
                      want_decomposition ? Matrix::Zero(n, sz.r) : Matrix(),
                      0};
    return st;
}

}  // namespace

TurnstileState turnstile_init(Index n, Index d, Index k, uint64_t seed, bool want_decomposition,
                              Preset preset) {
    return make_state(n, d, k, seed, want_decomposition, preset);
}

Index TurnstileState::stored_words(bool include_C) const {
    Index words = L.size() + N.size() + M.size() + D.size();
    if (include_C) words += C.size();
    return words;
}

void turnstile_update(TurnstileState& st, Index x, Index y, double c) {
    if (x < 0 || x >= st.n || y < 0 || y >= st.d)
        throw std::out_of_range("turnstile_update: index out of range");

    // sketch columns at the touched row index, sketch rows at the column index
    Vector t1col = st.genT1.column(x);  // t1
    Vector scol = st.genS.column(x);    // s
    Vector rrow = st.genR.column(y);    // r   (R is d x r, row y)
    Vector t2row = st.genT2.column(y);  // t2  (T2 is d x t2, row y)

    st.L.noalias() += t1col * (c * rrow.transpose());
    st.N.noalias() += scol * (c * t2row.transpose());
    st.M.noalias() += t1col * (c * t2row.transpose());
    st.D.col(y) += c * scol;
    if (st.decomposition) st.C.row(x) += c * rrow.transpose();
    ++st.update_count;
}

StreamFactors turnstile_finalize(const TurnstileState& st) {
    StreamFactors out;
    if (st.L.isZero(0.0) && st.N.isZero(0.0) && st.M.isZero(0.0)) {
        out.Vstar = Matrix::Zero(st.k, st.d);
        if (st.decomposition) out.Ustar = Matrix::Zero(st.n, st.k);
        return out;
    }

    Matrix Xhat = rank_constrained_solve(st.M, st.L, st.N, st.k);  // r x s
    SvdResult s = svd(Xhat);
    const Index have = std::min<Index>(st.k, s.singular_values.size());

    Matrix Vh = Matrix::Zero(st.k, Xhat.cols());
    Vh.topRows(have) =
        s.singular_values.head(have).asDiagonal() * s.right_vectors.leftCols(have).transpose();
    out.Vstar = Vh * st.D;  // k x d

    if (st.decomposition) {
        Matrix Uh = Matrix::Zero(Xhat.rows(), st.k);
        Uh.leftCols(have) = s.left_vectors.leftCols(have);
        out.Ustar = st.C * Uh;  // n x k
    }
    return out;
}

RowUpdateState rowupdate_init(Index n, Index d, Index k, uint64_t seed, bool want_decomposition,
                              Preset preset) {
    RowUpdateState st{make_state(n, d, k, seed, want_decomposition, preset),
                      DenseSketchGen(SketchSpec{SketchKind::dense_stable,
                                                preset_rows(k, SketchKind::dense_stable, preset),
                                                1.0, 1.0, stream_indep_degree(d, preset), seed},
                                     tags::kSprime),
                      0,
                      L1Options{},
                      {},
                      Matrix(),
                      Matrix(),
                      Matrix(),
                      std::vector<bool>(static_cast<size_t>(n), false)};
    st.block_size = std::max<Index>(preset_rows(k, SketchKind::dense_stable, preset), 8);
    st.pending = Matrix::Zero(st.block_size, d);
    st.Rmat = st.base.genR.materialize(d).transpose();    // d x r
    st.T2mat = st.base.genT2.materialize(d).transpose();  // d x t2
    return st;
}

namespace {

void flush_block(RowUpdateState& st) {
    const Index b = static_cast<Index>(st.pending_rows.size());
    if (b == 0) return;
    TurnstileState& t = st.base;

    // block-local fit: B_blk = Y* (S'_blk A_blk)
    Matrix Sp(st.genSprime.rows(), b);
    for (Index j = 0; j < b; ++j) Sp.col(j) = st.genSprime.column(st.pending_rows[static_cast<size_t>(j)]);
    Matrix SpA = Sp * st.pending.topRows(b);  // m x d
    Matrix Y = fit_rows_l1(SpA, st.pending.topRows(b), st.reg);
    Matrix B = Y * SpA;  // b x d

    Matrix BR = B * st.Rmat;    // b x r
    Matrix BT2 = B * st.T2mat;  // b x t2
    for (Index j = 0; j < b; ++j) {
        const Index i = st.pending_rows[static_cast<size_t>(j)];
        Vector t1col = t.genT1.column(i);
        Vector scol = t.genS.column(i);
        t.L.noalias() += t1col * BR.row(j);
        t.N.noalias() += scol * BT2.row(j);
        t.M.noalias() += t1col * BT2.row(j);
        t.D.noalias() += scol * B.row(j);
        if (t.decomposition) t.C.row(i) += BR.row(j);
        ++t.update_count;
    }
    st.pending_rows.clear();
}

}  // namespace

void rowupdate_ingest(RowUpdateState& st, Index row_index, const Vector& row) {
    if (row_index < 0 || row_index >= st.base.n)
        throw std::out_of_range("rowupdate_ingest: row index out of range");
    if (row.size() != st.base.d) throw std::invalid_argument("rowupdate_ingest: row length mismatch");
    if (st.seen[static_cast<size_t>(row_index)])
        throw std::invalid_argument("rowupdate_ingest: duplicate row index");
    st.seen[static_cast<size_t>(row_index)] = true;

    st.pending.row(static_cast<Index>(st.pending_rows.size())) = row.transpose();
    st.pending_rows.push_back(row_index);
    if (static_cast<Index>(st.pending_rows.size()) == st.block_size) flush_block(st);
}

StreamFactors rowupdate_finalize(RowUpdateState& st) {
    flush_block(st);
    return turnstile_finalize(st.base);
}

}  // namespace rlra
