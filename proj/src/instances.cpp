#include "rlra/instances.hpp"

#include <cmath>
#include <stdexcept>

#include "rlra/rng.hpp"

namespace rlra {

InstanceKind instance_kind_from_string(const std::string& s) {
    if (s == "cauchy-hard") return InstanceKind::cauchy_hard;
    if (s == "subset-hard") return InstanceKind::subset_hard;
    if (s == "ose-hard") return InstanceKind::ose_hard;
    if (s == "heuristic-counterexample") return InstanceKind::heuristic_counterexample;
    if (s == "planted") return InstanceKind::planted;
    if (s == "rank-exact") return InstanceKind::rank_exact;
    throw std::invalid_argument("unknown instance kind: " + s);
}

std::string to_string(InstanceKind k) {
    switch (k) {
        case InstanceKind::cauchy_hard: return "cauchy-hard";
        case InstanceKind::subset_hard: return "subset-hard";
        case InstanceKind::ose_hard: return "ose-hard";
        case InstanceKind::heuristic_counterexample: return "heuristic-counterexample";
        case InstanceKind::planted: return "planted";
        case InstanceKind::rank_exact: return "rank-exact";
    }
    return "?";
}

void InstanceSpec::validate() const {
    switch (kind) {
        case InstanceKind::cauchy_hard:
        case InstanceKind::subset_hard:
            if (d < 2) throw std::invalid_argument(to_string(kind) + ": requires d >= 2");
            break;
        case InstanceKind::ose_hard:
            if (n < 1 || k < 1) throw std::invalid_argument("ose-hard: requires n >= 1, k >= 1");
            break;
        case InstanceKind::heuristic_counterexample:
            if (n < 1) throw std::invalid_argument("heuristic-counterexample: requires n >= 1");
            if (!(eps > 0.0 && eps < 0.5))
                throw std::invalid_argument("heuristic-counterexample: requires eps in (0,0.5)");
            if (!(gamma > 0.0))
                throw std::invalid_argument("heuristic-counterexample: requires gamma > 0");
            break;
        case InstanceKind::planted:
            if (n < 1 || d < 1 || k < 1 || k > std::min(n, d))
                throw std::invalid_argument("planted: requires 1 <= k <= min(n,d)");
            if (!(outlier_density >= 0.0 && outlier_density <= 1.0))
                throw std::invalid_argument("planted: outlier_density must be in [0,1]");
            if (!(outlier_scale >= 0.0))
                throw std::invalid_argument("planted: outlier_scale must be >= 0");
            break;
        case InstanceKind::rank_exact:
            if (n < 1 || d < 1 || k < 1 || k > std::min(n, d))
                throw std::invalid_argument("rank-exact: requires 1 <= k <= min(n,d)");
            break;
    }
}

namespace {

Matrix gaussian_matrix(Index rows, Index cols, uint64_t seed, uint64_t stream) {
    Matrix G(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j)
            G(i, j) = rng::gaussian(rng::derive(seed, stream), static_cast<uint64_t>(i),
                                    static_cast<uint64_t>(j));
    return G;
}

Matrix planted_noise(const InstanceSpec& spec, const Matrix& L) {
    const Index n = spec.n, d = spec.d;
    Matrix E = Matrix::Zero(n, d);
    const auto count =
        static_cast<Index>(std::ceil(spec.outlier_density * static_cast<double>(n * d)));
    const double mu = spec.outlier_scale * L.cwiseAbs().mean();
    Index placed = 0;
    for (uint64_t t = 0; placed < count; ++t) {
        const uint64_t h = rng::derive(spec.seed, 3, t);
        const Index i = static_cast<Index>(h % static_cast<uint64_t>(n));
        const Index j = static_cast<Index>((h / static_cast<uint64_t>(n)) % static_cast<uint64_t>(d));
        if (E(i, j) != 0.0) continue;
        E(i, j) = (rng::derive(spec.seed, 4, t) & 1) ? mu : -mu;
        ++placed;
    }
    return E;
}

}  // namespace

Matrix gen_instance(const InstanceSpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case InstanceKind::cauchy_hard: {
            const double alpha = std::ceil(std::log(static_cast<double>(spec.d)));
            Matrix A = Matrix::Identity(spec.d, spec.d);
            A.row(0) += alpha * Matrix::Ones(1, spec.d);
            return A;
        }
        case InstanceKind::subset_hard: {
            Matrix A = Matrix::Zero(spec.d - 1, spec.d);
            A.col(0).setOnes();
            A.block(0, 1, spec.d - 1, spec.d - 1) = Matrix::Identity(spec.d - 1, spec.d - 1);
            return A;
        }
        case InstanceKind::ose_hard: {
            Matrix A(spec.n, spec.k + spec.n);
            A.leftCols(spec.k) = gaussian_matrix(spec.n, spec.k, spec.seed, 1);
            A.rightCols(spec.n) = Matrix::Identity(spec.n, spec.n);
            return A;
        }
        case InstanceKind::heuristic_counterexample: {
            const Index n = spec.n;
            const double nd = static_cast<double>(n);
            Matrix A = Matrix::Zero(2 * n + 2, 2 * n + 2);
            A(0, 0) = std::pow(nd, 2.0 + spec.gamma);
            A(1, 1) = std::pow(nd, 1.5 + spec.eps);
            A.block(2, 2, n, n).setOnes();
            A.block(2 + n, 2 + n, n, n).setOnes();
            return A;
        }
        case InstanceKind::planted: {
            Matrix L = gaussian_matrix(spec.n, spec.k, spec.seed, 1) *
                       gaussian_matrix(spec.k, spec.d, spec.seed, 2);
            return L + planted_noise(spec, L);
        }
        case InstanceKind::rank_exact:
            return gaussian_matrix(spec.n, spec.k, spec.seed, 1) *
                   gaussian_matrix(spec.k, spec.d, spec.seed, 2);
    }
    throw std::logic_error("gen_instance: unreachable");
}

std::optional<double> instance_opt_bound(const InstanceSpec& spec) {
    switch (spec.kind) {
        case InstanceKind::planted: {
            Matrix L = gaussian_matrix(spec.n, spec.k, spec.seed, 1) *
                       gaussian_matrix(spec.k, spec.d, spec.seed, 2);
            return planted_noise(spec, L).cwiseAbs().sum();
        }
        case InstanceKind::heuristic_counterexample:
            return std::pow(static_cast<double>(spec.n), 1.5 + spec.eps);
        case InstanceKind::rank_exact:
            return 0.0;
        default:
            return std::nullopt;
    }
}

}  // namespace rlra
