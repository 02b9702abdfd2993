#include "rlra/sketch.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

#include "rlra/linalg.hpp"

namespace rlra {

void SketchSpec::validate() const {
    if (rows < 1) throw std::invalid_argument("SketchSpec: rows must be >= 1");
    if (!(scale > 0.0)) throw std::invalid_argument("SketchSpec: scale must be positive");
    if (!(p >= 1.0 && p <= 2.0)) throw std::invalid_argument("SketchSpec: p must be in [1,2]");
    if (w != 0 && w < 2) throw std::invalid_argument("SketchSpec: w must be 0 or >= 2");
}

DenseSketchGen::DenseSketchGen(const SketchSpec& spec, uint64_t tag) : spec_(spec), tag_(tag) {
    spec_.validate();
    if (spec_.kind != SketchKind::dense_stable)
        throw std::invalid_argument("DenseSketchGen: kind must be dense-stable");
    if (spec_.w >= 2) {
        hash_u1_.reserve(spec_.rows);
        hash_u2_.reserve(spec_.rows);
        for (Index r = 0; r < spec_.rows; ++r) {
            hash_u1_.emplace_back(rng::derive(spec_.seed, tag_, r, 1), spec_.w);
            hash_u2_.emplace_back(rng::derive(spec_.seed, tag_, r, 2), spec_.w);
        }
    }
}

double DenseSketchGen::entry(Index r, Index c) const {
    double u1, u2;
    if (spec_.w >= 2) {
        u1 = hash_u1_[r].u01_at(static_cast<uint64_t>(c));
        u2 = hash_u2_[r].u01_at(static_cast<uint64_t>(c));
    } else {
        u1 = rng::to_u01(rng::derive(spec_.seed, tag_, r, c, 1));
        u2 = rng::to_u01(rng::derive(spec_.seed, tag_, r, c, 2));
    }
    return spec_.scale * rng::sample_stable(spec_.p, u1, u2);
}

Vector DenseSketchGen::column(Index c) const {
    Vector v(spec_.rows);
    for (Index r = 0; r < spec_.rows; ++r) v(r) = entry(r, c);
    return v;
}

Matrix DenseSketchGen::materialize(Index n) const {
    Matrix S(spec_.rows, n);
    for (Index r = 0; r < spec_.rows; ++r)
        for (Index c = 0; c < n; ++c) S(r, c) = entry(r, c);
    return S;
}

Matrix make_dense_sketch(const SketchSpec& spec, Index n, uint64_t tag) {
    return DenseSketchGen(spec, tag).materialize(n);
}

SparseSketch make_sparse_sketch(const SketchSpec& spec, Index n, uint64_t tag) {
    spec.validate();
    if (spec.kind != SketchKind::sparse_stable)
        throw std::invalid_argument("make_sparse_sketch: kind must be sparse-stable");
    SparseSketch pi;
    pi.m = spec.rows;
    pi.n = n;
    pi.scale = spec.scale;
    pi.bucket.resize(n);
    pi.value.resize(n);
    for (Index c = 0; c < n; ++c) {
        const double ub = rng::to_u01(rng::derive(spec.seed, tag, c, 0, 0));
        Index b = static_cast<Index>(ub * static_cast<double>(pi.m));
        if (b >= pi.m) b = pi.m - 1;
        pi.bucket[c] = b;
        const double u1 = rng::to_u01(rng::derive(spec.seed, tag, c, 0, 1));
        const double u2 = rng::to_u01(rng::derive(spec.seed, tag, c, 0, 2));
        pi.value[c] = rng::sample_stable(spec.p, u1, u2);
    }
    return pi;
}

Matrix SparseSketch::densify() const {
    Matrix S = Matrix::Zero(m, n);
    for (Index c = 0; c < n; ++c) S(bucket[c], c) = scale * value[c];
    return S;
}

Matrix apply_sparse(const SparseSketch& pi, const Matrix& A) {
    if (A.rows() != pi.n) throw std::invalid_argument("apply_sparse: dimension mismatch");
    Matrix out = Matrix::Zero(pi.m, A.cols());
    for (Index i = 0; i < pi.n; ++i) out.row(pi.bucket[i]) += (pi.scale * pi.value[i]) * A.row(i);
    return out;
}

Matrix apply_sparse(const SparseSketch& pi, const SparseMatrix& A) {
    if (A.rows != pi.n) throw std::invalid_argument("apply_sparse: dimension mismatch");
    Matrix out = Matrix::Zero(pi.m, A.cols);
    // entries are sorted by (row, col): per output cell the accumulation order
    // matches the dense path, so results are bit-identical.
    for (const SparseMatrix::Entry& e : A.entries)
        out(pi.bucket[e.row], e.col) += (pi.scale * pi.value[e.row]) * e.value;
    return out;
}

Vector limited_indep_row(uint64_t seed, int w, Index n, double p) {
    if (w < 2) throw std::invalid_argument("limited_indep_row: w must be >= 2");
    rng::PolyHash h1(rng::derive(seed, 0, 0, 1), w);
    rng::PolyHash h2(rng::derive(seed, 0, 0, 2), w);
    Vector row(n);
    for (Index i = 0; i < n; ++i)
        row(i) = rng::sample_stable(p, h1.u01_at(static_cast<uint64_t>(i)),
                                    h2.u01_at(static_cast<uint64_t>(i)));
    return row;
}

LewisState lewis_weights(const Matrix& A, double p, int max_iters, double tol) {
    const Index n = A.rows(), d = A.cols();
    if (n < d) throw std::invalid_argument("lewis_weights: rows must be >= cols");
    if (!(p >= 1.0 && p <= 2.0)) throw std::invalid_argument("lewis_weights: p must be in [1,2]");
    if (max_iters < 0) max_iters = static_cast<int>(std::ceil(std::log2(std::max<Index>(n, 2)))) + 16;

    LewisState st;
    st.p = p;
    st.weights = Vector::Ones(n);
    const double expo = 1.0 - 2.0 / p;  // <= 0 for p in [1,2]

    Vector tau(n);
    for (int it = 0; it < max_iters; ++it) {
        // Gram = A^T W^{1-2/p} A, via B = W^{(1-2/p)/2} A
        Vector half = st.weights.cwiseMax(1e-30).array().pow(expo / 2.0);
        Matrix B = half.asDiagonal() * A;
        Matrix gram = B.transpose() * B;

        Eigen::LLT<Matrix> llt(gram);
        if (llt.info() != Eigen::Success) {
            // rank-deficient input: ridge keeps the solve defined
            const double ridge = 1e-10 * gram.norm();
            gram += ridge * Matrix::Identity(d, d);
            llt.compute(gram);
            if (llt.info() != Eigen::Success)
                throw std::runtime_error("lewis_weights: Gram factorization failed");
        }
        Matrix sol = llt.solve(A.transpose());  // d x n
        for (Index i = 0; i < n; ++i) tau(i) = A.row(i).dot(sol.col(i));

        double res = 0.0;
        for (Index i = 0; i < n; ++i)
            res = std::max(res, std::abs(tau(i) - std::pow(st.weights(i), 2.0 / p)));
        st.residual_history.push_back(res);
        st.fixed_point_residual = res;
        st.iterations = it + 1;
        if (res <= tol) {
            st.converged = true;
            break;
        }
        st.weights = tau.cwiseMax(0.0).array().pow(p / 2.0);
    }
    return st;
}

SamplingMatrix lewis_sampler(const LewisState& state, Index N, uint64_t seed, uint64_t tag) {
    if (N < 1) throw std::invalid_argument("lewis_sampler: N must be >= 1");
    const Index n = state.weights.size();
    const double total = state.weights.sum();
    if (!(total > 0.0)) throw std::invalid_argument("lewis_sampler: all-zero weights");

    std::vector<double> cdf(static_cast<size_t>(n));
    double acc = 0.0;
    for (Index i = 0; i < n; ++i) {
        acc += state.weights(i) / total;
        cdf[static_cast<size_t>(i)] = acc;
    }
    cdf.back() = 1.0;

    SamplingMatrix S;
    S.N = N;
    S.p = state.p;
    S.selected.resize(N);
    S.rescale.resize(N);
    for (Index t = 0; t < N; ++t) {
        const double u = rng::to_u01(rng::derive(seed, tag, t, 0));
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        const Index i = static_cast<Index>(it - cdf.begin());
        const double pi = state.weights(i) / total;
        S.selected[t] = i;
        S.rescale[t] = std::pow(static_cast<double>(N) * pi, -1.0 / state.p);
    }
    return S;
}

Matrix SamplingMatrix::apply_rows(const Matrix& A) const {
    Matrix out(N, A.cols());
    for (Index t = 0; t < N; ++t) out.row(t) = rescale[t] * A.row(selected[t]);
    return out;
}

Matrix SamplingMatrix::apply_cols(const Matrix& A) const {
    Matrix out(A.rows(), N);
    for (Index t = 0; t < N; ++t) out.col(t) = rescale[t] * A.col(selected[t]);
    return out;
}

}  // namespace rlra
