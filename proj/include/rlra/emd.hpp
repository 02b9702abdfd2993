#ifndef RLRA_EMD_HPP
#define RLRA_EMD_HPP

#include <optional>
#include <vector>

#include "rlra/lowrank.hpp"
#include "rlra/types.hpp"

namespace rlra {

/// Mass distribution on a delta x delta grid (delta a power of two),
/// cells in row-major order.
struct EmdGrid {
    Index delta = 0;
    Vector cells;  // delta^2 non-negative masses
};

Index emd_embed_dim(Index delta);

/// Dyadic-grid embedding: concatenated per-level cell sums, level l scaled
/// by 2^l, levels l = 0 .. log2(delta). The l1 distance of two embeddings
/// dominates the earth-mover distance of the (equal-mass) inputs and exceeds
/// it by at most an O(log delta) factor; a mass imbalance contributes
/// Theta(delta) * |imbalance| through the coarsest level.
/// Throws std::invalid_argument on negative mass or non-power-of-two delta.
Vector emd_embed(const Vector& cells, Index delta);

inline double emd_embedded_distance(const Vector& ex, const Vector& ey) {
    return (ex - ey).lpNorm<1>();
}

/// Exact ||w||_EEMD on the grid: minimum transport cost between the positive
/// and negative parts of w under the l1 ground metric, with residual mass
/// dumped at 2*delta per unit. Solved as a min-cost transportation problem
/// by successive shortest paths.
double eemd_exact(const Vector& w, Index delta);

struct EmdFitResult {
    Factorization fac;  // fit in embedded space; cost_l1 is the embedded cost
    double embedded_cost = 0.0;
    // exact-EMD cost of the level-0 block of the output, tiny instances only
    std::optional<double> exact_emd_cost;
};

/// Embeds every column, runs the two-stage fit in embedded space.
EmdFitResult fit_emd(const std::vector<Vector>& columns, Index k, Index delta,
                     const FitConfig& cfg = {});

}  // namespace rlra

#endif
