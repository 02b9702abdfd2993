#include "rlra/emd.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rlra/linalg.hpp"

namespace rlra {

namespace {

bool is_power_of_two(Index x) { return x >= 1 && (x & (x - 1)) == 0; }

Index levels_of(Index delta) {
    Index l = 0;
    while ((Index{1} << l) < delta) ++l;
    return l + 1;  // includes level 0 and the single top cell
}

}  // namespace

Index emd_embed_dim(Index delta) {
    if (!is_power_of_two(delta)) throw std::invalid_argument("emd: delta must be a power of two");
    Index dim = 0;
    for (Index l = 0; l < levels_of(delta); ++l) {
        const Index side = delta >> l;
        dim += side * side;
    }
    return dim;
}

Vector emd_embed(const Vector& cells, Index delta) {
    if (!is_power_of_two(delta)) throw std::invalid_argument("emd_embed: delta must be a power of two");
    if (cells.size() != delta * delta)
        throw std::invalid_argument("emd_embed: cells must have delta^2 entries");
    if ((cells.array() < 0.0).any()) throw std::invalid_argument("emd_embed: negative mass");

    Vector out(emd_embed_dim(delta));
    Index off = 0;
    for (Index l = 0; l < levels_of(delta); ++l) {
        const Index side = delta >> l;
        const Index block = Index{1} << l;
        const double scale = static_cast<double>(block);
        for (Index r = 0; r < side; ++r)
            for (Index c = 0; c < side; ++c) {
                double sum = 0.0;
                for (Index dr = 0; dr < block; ++dr)
                    for (Index dc = 0; dc < block; ++dc)
                        sum += cells((r * block + dr) * delta + (c * block + dc));
                out(off + r * side + c) = scale * sum;
            }
        off += side * side;
    }
    return out;
}

double eemd_exact(const Vector& w, Index delta) {
    if (!is_power_of_two(delta)) throw std::invalid_argument("eemd_exact: delta must be a power of two");
    if (w.size() != delta * delta)
        throw std::invalid_argument("eemd_exact: w must have delta^2 entries");

    // Transportation instance: sources = positive cells plus a virtual source,
    // sinks = negative cells plus a virtual sink. Real-real arcs cost the grid
    // l1 distance; dumping into / filling from the virtual nodes costs
    // 2*delta; virtual-virtual is free.
    struct Node {
        Index r, c;
        double mass;
        bool virt;
    };
    std::vector<Node> src, snk;
    double pos = 0.0, neg = 0.0;
    for (Index i = 0; i < w.size(); ++i) {
        const Index r = i / delta, c = i % delta;
        if (w(i) > 0.0) {
            src.push_back({r, c, w(i), false});
            pos += w(i);
        } else if (w(i) < 0.0) {
            snk.push_back({r, c, -w(i), false});
            neg += w(i);
        }
    }
    neg = -neg;
    if (pos == 0.0 && neg == 0.0) return 0.0;
    src.push_back({0, 0, neg, true});
    snk.push_back({0, 0, pos, true});

    const size_t ns = src.size(), nt = snk.size();
    auto cost = [&](size_t i, size_t j) -> double {
        if (src[i].virt && snk[j].virt) return 0.0;
        if (src[i].virt || snk[j].virt) return 2.0 * static_cast<double>(delta);
        return static_cast<double>(std::abs(src[i].r - snk[j].r) + std::abs(src[i].c - snk[j].c));
    };

    // successive shortest augmenting paths with node potentials
    std::vector<double> us(ns, 0.0), ut(nt, 0.0);
    std::vector<double> rem_s(ns), rem_t(nt);
    for (size_t i = 0; i < ns; ++i) rem_s[i] = src[i].mass;
    for (size_t j = 0; j < nt; ++j) rem_t[j] = snk[j].mass;
    std::vector<std::vector<double>> flow(ns, std::vector<double>(nt, 0.0));
    double total = 0.0;

    const double inf = std::numeric_limits<double>::infinity();
    while (true) {
        size_t s0 = ns;
        for (size_t i = 0; i < ns; ++i)
            if (rem_s[i] > 1e-15) {
                s0 = i;
                break;
            }
        if (s0 == ns) break;

        // Bellman-Ford over the bipartite residual graph from all nonempty sources
        std::vector<double> dist_t(nt, inf);
        std::vector<double> dist_s(ns, inf);
        std::vector<int> par_t(nt, -1);   // source index reaching sink j
        std::vector<int> par_s(ns, -1);   // sink index reaching source i backwards
        for (size_t i = 0; i < ns; ++i)
            if (rem_s[i] > 1e-15) dist_s[i] = 0.0;
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t i = 0; i < ns; ++i) {
                if (dist_s[i] == inf) continue;
                for (size_t j = 0; j < nt; ++j) {
                    const double cd = dist_s[i] + cost(i, j);
                    if (cd < dist_t[j] - 1e-15) {
                        dist_t[j] = cd;
                        par_t[j] = static_cast<int>(i);
                        changed = true;
                    }
                }
            }
            for (size_t j = 0; j < nt; ++j) {
                if (dist_t[j] == inf) continue;
                for (size_t i = 0; i < ns; ++i) {
                    if (flow[i][j] > 1e-15) {
                        const double cd = dist_t[j] - cost(i, j);
                        if (cd < dist_s[i] - 1e-15) {
                            dist_s[i] = cd;
                            par_s[i] = static_cast<int>(j);
                            changed = true;
                        }
                    }
                }
            }
        }

        size_t jbest = nt;
        double dbest = inf;
        for (size_t j = 0; j < nt; ++j)
            if (rem_t[j] > 1e-15 && dist_t[j] < dbest) {
                dbest = dist_t[j];
                jbest = j;
            }
        if (jbest == nt) break;

        // trace path, find bottleneck
        double bott = rem_t[jbest];
        {
            size_t j = jbest;
            while (true) {
                size_t i = static_cast<size_t>(par_t[j]);
                if (par_s[i] < 0) {
                    bott = std::min(bott, rem_s[i]);
                    break;
                }
                size_t jprev = static_cast<size_t>(par_s[i]);
                bott = std::min(bott, flow[i][jprev]);
                j = jprev;
            }
        }
        {
            size_t j = jbest;
            while (true) {
                size_t i = static_cast<size_t>(par_t[j]);
                flow[i][j] += bott;
                total += bott * cost(i, j);
                if (par_s[i] < 0) {
                    rem_s[i] -= bott;
                    break;
                }
                size_t jprev = static_cast<size_t>(par_s[i]);
                flow[i][jprev] -= bott;
                total -= bott * cost(i, jprev);
                j = jprev;
            }
            rem_t[jbest] -= bott;
        }
    }
    return total;
}

EmdFitResult fit_emd(const std::vector<Vector>& columns, Index k, Index delta,
                     const FitConfig& cfg) {
    if (columns.empty()) throw std::invalid_argument("fit_emd: no columns");
    const Index dim = emd_embed_dim(delta);
    Matrix E(dim, static_cast<Index>(columns.size()));
    for (size_t j = 0; j < columns.size(); ++j) E.col(static_cast<Index>(j)) = emd_embed(columns[j], delta);

    EmdFitResult res;
    res.fac = fit_polyklogd(E, k, cfg);
    res.fac.algo_tag = "emd";
    res.embedded_cost = res.fac.cost_l1;

    const bool tiny = delta <= 8 && columns.size() <= 32;
    if (tiny) {
        // level 0 of the embedding is the grid itself
        Matrix approx = res.fac.U * res.fac.V;
        double acc = 0.0;
        for (size_t j = 0; j < columns.size(); ++j) {
            Vector diff =
                approx.col(static_cast<Index>(j)).head(delta * delta) - columns[j];
            acc += eemd_exact(diff, delta);
        }
        res.exact_emd_cost = acc;
    }
    return res;
}

}  // namespace rlra
