#ifndef RLRA_LOWRANK_HPP
#define RLRA_LOWRANK_HPP

#include <optional>
#include <string>
#include <utility>

#include "rlra/regression.hpp"
#include "rlra/sketch.hpp"
#include "rlra/types.hpp"

namespace rlra {

struct Factorization {
    Matrix U;  // n x k
    Matrix V;  // k x d
    Index k = 0;
    double cost_l1 = 0.0;  // entrywise-p cost against the reference matrix
    uint64_t seed = 0;
    std::string algo_tag;
};

enum class Preset { practical, theory };

struct SketchSizes {
    Index s = 0;   // left sketch rows
    Index r = 0;   // right sketch columns
    Index t1 = 0;  // left core sketch rows
    Index t2 = 0;  // right core sketch columns
};

/// Rows for one sketch under a preset. The practical preset uses
/// ceil(4 k log2(k+2)) everywhere; the theory preset keeps the same count for
/// dense sketches and blows up to ceil(k^5 log2^5(k+2)) for sparse ones.
Index preset_rows(Index k, SketchKind kind, Preset preset);
SketchSizes preset_sizes(Index k, SketchKind left_kind, Preset preset);

struct FitConfig {
    uint64_t seed = 0;
    Preset preset = Preset::practical;
    double p = 1.0;
    L1Options reg;
    SketchKind stage1_kind = SketchKind::sparse_stable;
    int w = 0;  // limited-independence degree for sketches over the row index
    std::optional<SketchSizes> sizes;  // overrides the preset when set
    // draw stage-2 sketches from the S/R/T1/T2 streams shared with the
    // streaming and distributed pipelines instead of the fresh stage-2 ones
    bool stream_tags = false;

    SketchSizes resolved_sizes(Index k) const;
};

double factor_cost(const Matrix& U, const Matrix& V, const Matrix& A, double p);

/// Rank-m bicriteria fit: V = S A, U = row-wise l1 fits of A onto V.
Factorization bicriteria_fit(const Matrix& A, Index k, const SketchSpec& spec);

/// Rank-k split (X: r x k, Y: k x s) of argmin_{rank-k X'} ||L X' N - M||_F.
std::pair<Matrix, Matrix> solve_sketched_core(const Matrix& L, const Matrix& N, const Matrix& M,
                                              Index k);

/// Convenience overload taking the unsketched blocks: L = T1 AR, N = SA T2,
/// M = T1 A T2 with T1 (t1 x n) and T2 (d x t2) given explicitly.
std::pair<Matrix, Matrix> solve_sketched_core(const Matrix& AR, const Matrix& SA, const Matrix& T1,
                                              const Matrix& T2, const Matrix& A, Index k);

/// One-shot sketched fit: S, R, T1 sparse-stable, T2 dense-stable,
/// U = AR X, V = Y SA through the sketched core.
Factorization fit_input_sparsity(const Matrix& A, Index k, const FitConfig& cfg = {});

/// Rank-k fit of B = U_B V_B with every sketch product routed through the
/// r-dimensional core; B is only materialized to record the cost.
Factorization fit_rank_r_B(const Matrix& U_B, const Matrix& V_B, Index k,
                           const FitConfig& cfg = {});

/// Two-stage fit: stage 1 replaces A by B = U_B (SA) via row-wise l1 fits,
/// stage 2 runs the rank-r core fit on B. Cost is measured against A.
/// The stage-1 factors are exposed through the out parameters when non-null.
Factorization fit_polyklogd(const Matrix& A, Index k, const FitConfig& cfg = {},
                            Matrix* U_B_out = nullptr, Matrix* V_B_out = nullptr);

struct CurFactors {
    Matrix C;  // n x c, rescaled columns of A
    std::vector<Index> col_indices;
    std::vector<double> col_rescale;
    Matrix U;  // c x r
    Matrix R;  // r x d, rescaled rows of A
    std::vector<Index> row_indices;
    std::vector<double> row_rescale;
    Index k = 0;
    double cost_l1 = 0.0;
    uint64_t seed = 0;
};

CurFactors cur_decompose(const Matrix& A, Index k, const FitConfig& cfg = {});

/// Cost of the single column-subset candidate used by fit_subset_enum:
/// Lewis-sample rows of A[:, cols], solve the Frobenius core, report the
/// entrywise-p cost of the resulting rank-k candidate.
double subset_enum_candidate(const Matrix& A, Index k, const std::vector<Index>& cols,
                             const FitConfig& cfg, Factorization* out = nullptr);

/// Desk-scale column-subset enumeration (d <= 14, r <= 6): minimum-cost
/// candidate over all r-column subsets.
Factorization fit_subset_enum(const Matrix& A, Index k, Index r, const FitConfig& cfg = {});

/// lp variant of the two-stage pipeline; p = 1 reproduces fit_polyklogd
/// exactly for matching seeds.
Factorization fit_lp(const Matrix& A, Index k, double p, FitConfig cfg = {});

}  // namespace rlra

#endif
