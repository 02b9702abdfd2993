#include "rlra/lowrank.hpp"

#include <cmath>
#include <stdexcept>

#include "rlra/linalg.hpp"

namespace rlra {

namespace {

double log2k(Index k) { return std::log2(static_cast<double>(k) + 2.0); }

Factorization zero_factorization(Index n, Index d, Index k, uint64_t seed, const char* tag) {
    Factorization f;
    f.U = Matrix::Zero(n, k);
    f.V = Matrix::Zero(k, d);
    f.k = k;
    f.cost_l1 = 0.0;
    f.seed = seed;
    f.algo_tag = tag;
    return f;
}

// Splits a rank-<=k matrix Xhat into (X: r x k, Y: k x s) via its SVD,
// zero-padding when the numerical rank falls short of k.
std::pair<Matrix, Matrix> split_rank_k(const Matrix& Xhat, Index k) {
    SvdResult s = svd(Xhat);
    const Index have = std::min<Index>(k, s.singular_values.size());
    Matrix X = Matrix::Zero(Xhat.rows(), k);
    Matrix Y = Matrix::Zero(k, Xhat.cols());
    X.leftCols(have) = s.left_vectors.leftCols(have);
    Y.topRows(have) =
        s.singular_values.head(have).asDiagonal() * s.right_vectors.leftCols(have).transpose();
    return {X, Y};
}

Matrix right_sketch_dense(const SketchSpec& spec, Index d, uint64_t tag) {
    // d x t2 sketch applied from the right; generated as t2 x d and transposed
    return make_dense_sketch(spec, d, tag).transpose();
}

}  // namespace

Index preset_rows(Index k, SketchKind kind, Preset preset) {
    if (k < 1) throw std::invalid_argument("preset_rows: k must be >= 1");
    if (preset == Preset::theory && kind == SketchKind::sparse_stable) {
        const double l = log2k(k);
        return static_cast<Index>(std::ceil(std::pow(static_cast<double>(k), 5.0) * std::pow(l, 5.0)));
    }
    return static_cast<Index>(std::ceil(4.0 * static_cast<double>(k) * log2k(k)));
}

SketchSizes preset_sizes(Index k, SketchKind left_kind, Preset preset) {
    SketchSizes sz;
    sz.s = preset_rows(k, left_kind, preset);
    sz.r = preset_rows(k, left_kind, preset);
    sz.t1 = preset_rows(k, left_kind, preset);
    sz.t2 = preset_rows(k, SketchKind::dense_stable, preset);
    return sz;
}

SketchSizes FitConfig::resolved_sizes(Index k) const {
    if (sizes) return *sizes;
    return preset_sizes(k, stage1_kind, preset);
}

double factor_cost(const Matrix& U, const Matrix& V, const Matrix& A, double p) {
    return entrywise_norm(U * V - A, p);
}

Factorization bicriteria_fit(const Matrix& A, Index k, const SketchSpec& spec) {
    if (spec.rows < k) throw std::invalid_argument("bicriteria_fit: spec.rows must be >= k");
    const Index n = A.rows(), d = A.cols();
    const Index m = spec.rows;
    if (entrywise_norm(A, 1.0) == 0.0) return zero_factorization(n, d, m, spec.seed, "bicriteria");

    Matrix V;
    if (spec.kind == SketchKind::sparse_stable)
        V = apply_sparse(make_sparse_sketch(spec, n, tags::kS), A);
    else
        V = DenseSketchGen(spec, tags::kS).materialize(n) * A;

    Matrix U = fit_rows_l1(V, A, L1Options{spec.p, 1e-9, 500});

    Factorization f;
    f.U = std::move(U);
    f.V = std::move(V);
    f.k = m;
    f.seed = spec.seed;
    f.algo_tag = "bicriteria";
    f.cost_l1 = factor_cost(f.U, f.V, A, spec.p);
    return f;
}

std::pair<Matrix, Matrix> solve_sketched_core(const Matrix& L, const Matrix& N, const Matrix& M,
                                              Index k) {
    if (k > std::min(L.cols(), N.rows()))
        throw std::invalid_argument("solve_sketched_core: k exceeds min(r,s)");
    Matrix Xhat = rank_constrained_solve(M, L, N, k);  // r x s, rank <= k
    return split_rank_k(Xhat, k);
}

std::pair<Matrix, Matrix> solve_sketched_core(const Matrix& AR, const Matrix& SA, const Matrix& T1,
                                              const Matrix& T2, const Matrix& A, Index k) {
    return solve_sketched_core(T1 * AR, SA * T2, T1 * A * T2, k);
}

Factorization fit_input_sparsity(const Matrix& A, Index k, const FitConfig& cfg) {
    if (k < 1) throw std::invalid_argument("fit_input_sparsity: k must be >= 1");
    const Index n = A.rows(), d = A.cols();
    if (entrywise_norm(A, 1.0) == 0.0)
        return zero_factorization(n, d, k, cfg.seed, "input-sparsity");

    SketchSizes sz = cfg.resolved_sizes(k);
    SketchSpec base{SketchKind::sparse_stable, 0, cfg.p, 1.0, cfg.w, cfg.seed};

    SketchSpec specS = base;
    specS.rows = sz.s;
    SketchSpec specR = base;
    specR.rows = sz.r;
    specR.w = 0;  // right sketches stay fully independent
    SketchSpec specT1 = base;
    specT1.rows = sz.t1;
    SketchSpec specT2 = base;
    specT2.rows = sz.t2;
    specT2.kind = SketchKind::dense_stable;
    specT2.w = 0;

    SparseSketch S = make_sparse_sketch(specS, n, tags::kS);
    SparseSketch R = make_sparse_sketch(specR, d, tags::kR);  // applied to A^T
    SparseSketch T1 = make_sparse_sketch(specT1, n, tags::kT1);
    Matrix T2 = right_sketch_dense(specT2, d, tags::kT2);  // d x t2

    Matrix SA = apply_sparse(S, A);                           // s x d
    Matrix AR = apply_sparse(R, Matrix(A.transpose())).transpose();  // n x r
    Matrix T1A = apply_sparse(T1, A);                         // t1 x d

    Matrix L = apply_sparse(T1, AR);  // t1 x r
    Matrix N = SA * T2;               // s x t2
    Matrix M = T1A * T2;              // t1 x t2

    auto [X, Y] = solve_sketched_core(L, N, M, k);

    Factorization f;
    f.U = AR * X;
    f.V = Y * SA;
    f.k = k;
    f.seed = cfg.seed;
    f.algo_tag = "input-sparsity";
    f.cost_l1 = factor_cost(f.U, f.V, A, cfg.p);
    return f;
}

Factorization fit_rank_r_B(const Matrix& U_B, const Matrix& V_B, Index k, const FitConfig& cfg) {
    if (U_B.cols() != V_B.rows()) throw std::invalid_argument("fit_rank_r_B: factor shape mismatch");
    if (k < 1 || k > U_B.cols()) throw std::invalid_argument("fit_rank_r_B: need 1 <= k <= r");
    const Index n = U_B.rows(), d = V_B.cols();

    SketchSizes sz = cfg.resolved_sizes(k);
    SketchSpec spec{SketchKind::dense_stable, 0, cfg.p, 1.0, 0, cfg.seed};

    SketchSpec specS = spec;
    specS.rows = sz.s;
    specS.w = cfg.w;
    SketchSpec specR = spec;
    specR.rows = sz.r;
    SketchSpec specT1 = spec;
    specT1.rows = sz.t1;
    specT1.w = cfg.w;
    SketchSpec specT2 = spec;
    specT2.rows = sz.t2;

    const uint64_t tS = cfg.stream_tags ? tags::kS : tags::kS2;
    const uint64_t tR = cfg.stream_tags ? tags::kR : tags::kR2;
    const uint64_t tT1 = cfg.stream_tags ? tags::kT1 : tags::kT1b;
    const uint64_t tT2 = cfg.stream_tags ? tags::kT2 : tags::kT2b;

    // All products factor through the r-dimensional core.
    Matrix SU = DenseSketchGen(specS, tS).materialize(n) * U_B;     // s x r
    Matrix VR = V_B * right_sketch_dense(specR, d, tR);             // r x r'
    Matrix T1U = DenseSketchGen(specT1, tT1).materialize(n) * U_B;  // t1 x r
    Matrix VT2 = V_B * right_sketch_dense(specT2, d, tT2);          // r x t2

    Matrix SB = SU * V_B;    // s x d
    Matrix BR = U_B * VR;    // n x r'
    Matrix L = T1U * VR;     // t1 x r'
    Matrix N = SU * VT2;     // s x t2
    Matrix M = T1U * VT2;    // t1 x t2

    auto [X, Y] = solve_sketched_core(L, N, M, k);

    Factorization f;
    f.U = BR * X;
    f.V = Y * SB;
    f.k = k;
    f.seed = cfg.seed;
    f.algo_tag = "rank-r-core";
    f.cost_l1 = entrywise_norm(f.U * f.V - U_B * V_B, cfg.p);
    return f;
}

Factorization fit_polyklogd(const Matrix& A, Index k, const FitConfig& cfg, Matrix* U_B_out,
                            Matrix* V_B_out) {
    if (k < 1) throw std::invalid_argument("fit_polyklogd: k must be >= 1");
    const Index n = A.rows(), d = A.cols();
    if (entrywise_norm(A, 1.0) == 0.0) return zero_factorization(n, d, k, cfg.seed, "polyklogd");

    SketchSizes sz = cfg.resolved_sizes(k);

    // stage 1: V_B = SA, U_B = row-wise l1 fits of A onto V_B
    Matrix V_B;
    if (cfg.stage1_kind == SketchKind::sparse_stable) {
        SketchSpec specS{SketchKind::sparse_stable, sz.s, cfg.p, 1.0, 0, cfg.seed};
        V_B = apply_sparse(make_sparse_sketch(specS, n, tags::kSprime), A);
    } else {
        SketchSpec specS{SketchKind::dense_stable, sz.s, cfg.p, 1.0, cfg.w, cfg.seed};
        V_B = DenseSketchGen(specS, tags::kSprime).materialize(n) * A;
    }
    L1Options reg = cfg.reg;
    reg.p = cfg.p;
    Matrix U_B = fit_rows_l1(V_B, A, reg);
    if (U_B_out) *U_B_out = U_B;
    if (V_B_out) *V_B_out = V_B;

    // stage 2
    Factorization f = fit_rank_r_B(U_B, V_B, k, cfg);
    f.algo_tag = "polyklogd";
    f.cost_l1 = factor_cost(f.U, f.V, A, cfg.p);
    return f;
}

CurFactors cur_decompose(const Matrix& A, Index k, const FitConfig& cfg) {
    if (k < 1) throw std::invalid_argument("cur_decompose: k must be >= 1");
    const Index d1 = preset_rows(k, SketchKind::dense_stable, cfg.preset);
    const Index d2 = d1;

    Factorization base = fit_polyklogd(A, k, cfg);
    const Matrix& B1 = base.U;  // n x k

    const double rank_cut = 1e-10;
    SamplingMatrix D1;
    Matrix D1B1;
    LewisState lw1 = lewis_weights(B1, 1.0);
    for (int attempt = 0;; ++attempt) {
        if (attempt > 8) throw std::runtime_error("cur_decompose: degenerate row sample");
        D1 = lewis_sampler(lw1, d1, rng::derive(cfg.seed, 101, attempt));
        D1B1 = D1.apply_rows(B1);
        SvdResult s = svd(D1B1);
        if (s.singular_values(s.singular_values.size() - 1) >
            rank_cut * std::max(1.0, s.singular_values(0)))
            break;
    }

    Matrix D1A = D1.apply_rows(A);        // d1 x d
    Matrix B2 = pinv(D1B1) * D1A;         // k x d

    SamplingMatrix D2;
    Matrix B2D2;
    LewisState lw2 = lewis_weights(Matrix(B2.transpose()), 1.0);
    for (int attempt = 0;; ++attempt) {
        if (attempt > 8) throw std::runtime_error("cur_decompose: degenerate column sample");
        D2 = lewis_sampler(lw2, d2, rng::derive(cfg.seed, 102, attempt));
        B2D2 = D2.apply_cols(B2);  // k x d2
        SvdResult s = svd(B2D2);
        if (s.singular_values(s.singular_values.size() - 1) >
            rank_cut * std::max(1.0, s.singular_values(0)))
            break;
    }

    CurFactors cur;
    cur.C = D2.apply_cols(A);  // n x d2
    cur.col_indices = D2.selected;
    cur.col_rescale = D2.rescale;
    cur.U = pinv(B2D2) * pinv(D1B1);  // d2 x d1
    cur.R = D1A;
    cur.row_indices = D1.selected;
    cur.row_rescale = D1.rescale;
    cur.k = k;
    cur.seed = cfg.seed;
    cur.cost_l1 = entrywise_norm(cur.C * cur.U * cur.R - A, cfg.p);
    return cur;
}

double subset_enum_candidate(const Matrix& A, Index k, const std::vector<Index>& cols,
                             const FitConfig& cfg, Factorization* out) {
    const Index r = static_cast<Index>(cols.size());
    Matrix AR(A.rows(), r);
    for (Index j = 0; j < r; ++j) AR.col(j) = A.col(cols[static_cast<size_t>(j)]);

    uint64_t subset_key = 0;
    for (Index c : cols) subset_key = rng::chain(subset_key, static_cast<uint64_t>(c));

    LewisState lw = lewis_weights(AR, 1.0);
    const Index nd = preset_rows(k, SketchKind::dense_stable, cfg.preset);
    SamplingMatrix D = lewis_sampler(lw, nd, rng::derive(cfg.seed, 103, subset_key));
    Matrix DA = D.apply_rows(A);  // nd x d

    Matrix X = rank_constrained_solve(A, AR, DA, k);  // r x nd, rank <= k

    SvdResult s = svd(X);
    const Index have = std::min<Index>(k, s.singular_values.size());
    Matrix U = Matrix::Zero(A.rows(), k);
    Matrix V = Matrix::Zero(k, A.cols());
    U.leftCols(have) = AR * s.left_vectors.leftCols(have);
    V.topRows(have) =
        s.singular_values.head(have).asDiagonal() * (s.right_vectors.leftCols(have).transpose() * DA);

    const double cost = factor_cost(U, V, A, cfg.p);
    if (out) {
        out->U = std::move(U);
        out->V = std::move(V);
        out->k = k;
        out->cost_l1 = cost;
        out->seed = cfg.seed;
        out->algo_tag = "subset-enum";
    }
    return cost;
}

Factorization fit_subset_enum(const Matrix& A, Index k, Index r, const FitConfig& cfg) {
    const Index d = A.cols();
    if (d > 14 || r > 6) throw std::invalid_argument("fit_subset_enum: limits are d <= 14, r <= 6");
    if (k < 1 || k > r) throw std::invalid_argument("fit_subset_enum: need 1 <= k <= r");
    if (entrywise_norm(A, 1.0) == 0.0)
        return zero_factorization(A.rows(), d, k, cfg.seed, "subset-enum");

    Factorization best;
    double best_cost = std::numeric_limits<double>::infinity();

    std::vector<Index> comb(static_cast<size_t>(r));
    for (Index i = 0; i < r; ++i) comb[static_cast<size_t>(i)] = i;
    while (true) {
        Factorization cand;
        const double cost = subset_enum_candidate(A, k, comb, cfg, &cand);
        if (cost < best_cost) {
            best_cost = cost;
            best = std::move(cand);
        }
        Index i = r - 1;
        while (i >= 0 && comb[static_cast<size_t>(i)] == d - r + i) --i;
        if (i < 0) break;
        ++comb[static_cast<size_t>(i)];
        for (Index j = i + 1; j < r; ++j)
            comb[static_cast<size_t>(j)] = comb[static_cast<size_t>(j - 1)] + 1;
    }
    return best;
}

Factorization fit_lp(const Matrix& A, Index k, double p, FitConfig cfg) {
    if (!(p >= 1.0 && p < 2.0)) throw std::invalid_argument("fit_lp: p must be in [1,2)");
    cfg.p = p;
    Factorization f = fit_polyklogd(A, k, cfg);
    f.algo_tag = "lp";
    return f;
}

}  // namespace rlra
