#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "rlra/linalg.hpp"
#include "rlra/sketch.hpp"

using namespace rlra;

namespace {

Matrix random_matrix(Index n, Index d, uint64_t seed) {
    Matrix A(n, d);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < d; ++j) A(i, j) = rng::gaussian(seed, i, j);
    return A;
}

double median_abs(std::vector<double>& v) {
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end(),
                     [](double a, double b) { return std::abs(a) < std::abs(b); });
    return std::abs(v[v.size() / 2]);
}

}  // namespace

TEST_CASE("stable sampling inverse-CDF example at p=1") {
    CHECK(rng::sample_stable(1.0, 0.75, 0.5) == doctest::Approx(1.0));
}

TEST_CASE("stable sampling rejects boundary uniforms") {
    CHECK_THROWS_AS(rng::sample_stable(1.0, 0.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(rng::sample_stable(1.5, 0.5, 1.0), std::domain_error);
}

TEST_CASE("cauchy median of |X| over 1e5 draws is 1 within 0.03") {
    std::vector<double> draws(100000);
    for (size_t t = 0; t < draws.size(); ++t)
        draws[t] = rng::sample_stable(1.0, rng::u01(101, t, 0, 0), rng::u01(101, t, 0, 1));
    CHECK(median_abs(draws) == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("p=1.5 stability: median |a1 X1 + a2 X2| scales as ||a||_p") {
    const double p = 1.5;
    std::vector<double> single(100000), comb(100000);
    for (size_t t = 0; t < single.size(); ++t) {
        const double x1 = rng::sample_stable(p, rng::u01(7, t, 1, 0), rng::u01(7, t, 1, 1));
        const double x2 = rng::sample_stable(p, rng::u01(7, t, 2, 0), rng::u01(7, t, 2, 1));
        single[t] = x1;
        comb[t] = 1.0 * x1 + 2.0 * x2;
    }
    const double scale = std::pow(1.0 + std::pow(2.0, p), 1.0 / p);
    const double lhs = median_abs(comb);
    const double rhs = scale * median_abs(single);
    CHECK(std::abs(lhs - rhs) / rhs < 0.10);
}

TEST_CASE("gaussian branch has unit variance") {
    double acc = 0.0;
    const size_t N = 100000;
    for (size_t t = 0; t < N; ++t) {
        const double x = rng::sample_stable(2.0, rng::u01(9, t, 0, 0), rng::u01(9, t, 0, 1));
        acc += x * x;
    }
    CHECK(acc / static_cast<double>(N) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("dense sketch is deterministic in the seed") {
    SketchSpec spec{SketchKind::dense_stable, 5, 1.0, 1.0, 0, 1234};
    Matrix S1 = make_dense_sketch(spec, 7);
    Matrix S2 = make_dense_sketch(spec, 7);
    CHECK((S1 - S2).norm() == 0.0);
    spec.seed = 1235;
    CHECK((S1 - make_dense_sketch(spec, 7)).norm() != 0.0);
}

TEST_CASE("dense sketch scale multiplies the raw variate") {
    SketchSpec raw{SketchKind::dense_stable, 4, 1.0, 1.0, 0, 5};
    SketchSpec scaled = raw;
    scaled.scale = 1.0 / 4.0;
    Matrix S = make_dense_sketch(raw, 6);
    Matrix Sm = make_dense_sketch(scaled, 6);
    CHECK((Sm - S / 4.0).norm() == 0.0);
}

TEST_CASE("applying a dense sketch to a basis vector extracts its column") {
    SketchSpec spec{SketchKind::dense_stable, 4, 1.0, 1.0, 0, 6};
    Matrix S = make_dense_sketch(spec, 6);
    Vector e = Vector::Zero(6);
    e(2) = 1.0;
    CHECK(((S * e) - S.col(2)).norm() == 0.0);
}

TEST_CASE("sparse sketch has exactly one nonzero per column") {
    SketchSpec spec{SketchKind::sparse_stable, 5, 1.0, 1.0, 0, 77};
    SparseSketch pi = make_sparse_sketch(spec, 40);
    Matrix D = pi.densify();
    for (Index c = 0; c < 40; ++c) {
        Index nnz = 0;
        for (Index r = 0; r < 5; ++r)
            if (D(r, c) != 0.0) ++nnz;
        CHECK(nnz == 1);
    }
}

TEST_CASE("apply_sparse equals dense materialization") {
    SketchSpec spec{SketchKind::sparse_stable, 6, 1.0, 0.5, 0, 78};
    SparseSketch pi = make_sparse_sketch(spec, 30);
    Matrix A = random_matrix(30, 9, 79);
    Matrix direct = apply_sparse(pi, A);
    Matrix via_dense = pi.densify() * A;
    CHECK((direct - via_dense).cwiseAbs().maxCoeff() < 1e-12 * via_dense.cwiseAbs().maxCoeff());
}

TEST_CASE("apply_sparse on the zero matrix is zero") {
    SketchSpec spec{SketchKind::sparse_stable, 4, 1.0, 1.0, 0, 80};
    SparseSketch pi = make_sparse_sketch(spec, 10);
    CHECK(apply_sparse(pi, Matrix::Zero(10, 3)).isZero(0.0));
}

TEST_CASE("apply_sparse is bit-identical for sparse and dense representations") {
    SketchSpec spec{SketchKind::sparse_stable, 7, 1.0, 1.0, 0, 81};
    SparseSketch pi = make_sparse_sketch(spec, 25);
    Matrix A = random_matrix(25, 6, 82);
    for (Index i = 0; i < 25; ++i)
        for (Index j = 0; j < 6; ++j)
            if ((i * 6 + j) % 3 == 0) A(i, j) = 0.0;
    Matrix from_dense = apply_sparse(pi, A);
    Matrix from_sparse = apply_sparse(pi, SparseMatrix::from_dense(A));
    CHECK((from_dense - from_sparse).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("apply_sparse rejects dimension mismatch") {
    SketchSpec spec{SketchKind::sparse_stable, 4, 1.0, 1.0, 0, 83};
    SparseSketch pi = make_sparse_sketch(spec, 10);
    CHECK_THROWS_AS(apply_sparse(pi, Matrix::Zero(11, 3)), std::invalid_argument);
}

TEST_CASE("limited independence row is deterministic") {
    Vector r1 = limited_indep_row(123, 4, 50, 1.0);
    Vector r2 = limited_indep_row(123, 4, 50, 1.0);
    CHECK((r1 - r2).norm() == 0.0);
    CHECK((r1 - limited_indep_row(124, 4, 50, 1.0)).norm() != 0.0);
}

TEST_CASE("limited independence uniform stage has small pairwise correlation") {
    const int w = 4;
    const size_t trials = 100000;
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (size_t t = 0; t < trials; ++t) {
        rng::PolyHash h(rng::derive(42, t), w);
        const double x = h.u01_at(0), y = h.u01_at(1);
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    const double n = static_cast<double>(trials);
    const double corr = (sxy / n - sx / n * sy / n) /
                        std::sqrt((sxx / n - sx / n * sx / n) * (syy / n - sy / n * sy / n));
    CHECK(std::abs(corr) < 0.02);
}

TEST_CASE("limited independence marginal median for p=1 is 1 within 0.05") {
    std::vector<double> draws;
    draws.reserve(100000);
    for (uint64_t row = 0; row < 500; ++row) {
        Vector r = limited_indep_row(rng::derive(7, row), 4, 200, 1.0);
        for (Index i = 0; i < r.size(); ++i) draws.push_back(r(i));
    }
    CHECK(median_abs(draws) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("lewis weights of the identity are all ones") {
    LewisState st = lewis_weights(Matrix::Identity(10, 10), 1.0);
    CHECK((st.weights - Vector::Ones(10)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(st.fixed_point_residual == 0.0);
}

TEST_CASE("lewis weights sum to the column count at p=1") {
    Matrix A = random_matrix(120, 6, 90);
    LewisState st = lewis_weights(A, 1.0, 80, 1e-13);
    CHECK(st.weights.sum() == doctest::Approx(6.0).epsilon(1e-8));
}

TEST_CASE("lewis fixed point residual reaches 1e-8 on a random 200x5") {
    Matrix A = random_matrix(200, 5, 91);
    LewisState st = lewis_weights(A, 1.0);
    CHECK(st.converged);
    CHECK(st.fixed_point_residual <= 1e-8);
}

TEST_CASE("lewis residual is non-increasing over the final iterations") {
    Matrix A = random_matrix(150, 5, 92);
    LewisState st = lewis_weights(A, 1.0, 40, 1e-14);
    const size_t h = st.residual_history.size();
    REQUIRE(h >= 6);
    for (size_t i = h - 5; i < h; ++i)
        CHECK(st.residual_history[i] <= st.residual_history[i - 1] * (1.0 + 1e-9) + 1e-16);
}

TEST_CASE("lewis weights converge for p=1.5") {
    Matrix A = random_matrix(150, 4, 93);
    LewisState st = lewis_weights(A, 1.5);
    CHECK(st.fixed_point_residual <= 1e-8);
    CHECK(st.weights.sum() == doctest::Approx(4.0).epsilon(1e-5));
}

TEST_CASE("lewis sampler is uniform on the identity") {
    LewisState st;
    st.p = 1.0;
    st.weights = Vector::Ones(10);
    SamplingMatrix S = lewis_sampler(st, 20, 5);
    for (double r : S.rescale) CHECK(r == doctest::Approx(std::pow(20.0 / 10.0, -1.0)));
    SamplingMatrix S2 = lewis_sampler(st, 20, 5);
    CHECK(S.selected == S2.selected);
}

TEST_CASE("lewis sampler rejects all-zero weights") {
    LewisState st;
    st.p = 1.0;
    st.weights = Vector::Zero(4);
    CHECK_THROWS_AS(lewis_sampler(st, 3, 1), std::invalid_argument);
}

TEST_CASE("lewis sampling is an l1 embedding on random input") {
    Matrix A = random_matrix(500, 8, 94);
    LewisState st = lewis_weights(A, 1.0);
    int ok = 0, total = 0;
    for (uint64_t trial = 0; trial < 5; ++trial) {
        SamplingMatrix S = lewis_sampler(st, 200, rng::derive(95, trial));
        Matrix SA = S.apply_rows(A);
        for (uint64_t t = 0; t < 100; ++t) {
            Vector x(8);
            for (Index i = 0; i < 8; ++i) x(i) = rng::gaussian(rng::derive(96, trial, t), i, 0);
            const double full = (A * x).lpNorm<1>();
            const double samp = (SA * x).lpNorm<1>();
            ++total;
            if (samp >= 0.5 * full && samp <= 2.0 * full) ++ok;
        }
    }
    CHECK(ok >= static_cast<int>(0.95 * total));
}

TEST_CASE("dense cauchy no-dilation statistic") {
    const Index n = 200, d = 50, m = 20;
    Matrix M = random_matrix(n, d, 1000);
    const double m1 = entrywise_norm(M, 1.0);
    int ok = 0;
    for (uint64_t trial = 0; trial < 100; ++trial) {
        SketchSpec spec{SketchKind::dense_stable, m, 1.0, 1.0 / static_cast<double>(m), 0,
                        rng::derive(1001, trial)};
        Matrix S = make_dense_sketch(spec, n);
        if (entrywise_norm(S * M, 1.0) <= 8.0 * std::log(static_cast<double>(d)) * m1) ++ok;
    }
    CHECK(ok >= 95);
}

TEST_CASE("dense cauchy no-contraction statistic on an orthonormal basis") {
    const Index n = 200, k = 5;
    const Index m = static_cast<Index>(std::ceil(4.0 * k * std::log2(static_cast<double>(k))));
    Matrix G = random_matrix(n, k, 2000);
    Matrix U = svd(G).left_vectors;  // n x k orthonormal
    int ok = 0;
    for (uint64_t trial = 0; trial < 100; ++trial) {
        SketchSpec spec{SketchKind::dense_stable, m, 1.0, 1.0 / static_cast<double>(m), 0,
                        rng::derive(2001, trial)};
        Matrix SU = make_dense_sketch(spec, n) * U;
        double worst = std::numeric_limits<double>::infinity();
        for (uint64_t t = 0; t < 200; ++t) {
            Vector x(k);
            for (Index i = 0; i < k; ++i) x(i) = rng::gaussian(rng::derive(2002, trial, t), i, 0);
            x /= x.norm();
            worst = std::min(worst, (SU * x).lpNorm<1>() / (U * x).lpNorm<1>());
        }
        if (worst >= 0.1) ++ok;
    }
    CHECK(ok >= 95);
}

TEST_CASE("sketch spec validation") {
    SketchSpec bad{SketchKind::dense_stable, 0, 1.0, 1.0, 0, 1};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.rows = 2;
    bad.scale = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.scale = 1.0;
    bad.w = 1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
