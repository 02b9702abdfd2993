// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line with the measured statistic.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "rlra/bench.hpp"
#include "rlra/distributed.hpp"
#include "rlra/emd.hpp"
#include "rlra/instances.hpp"
#include "rlra/linalg.hpp"
#include "rlra/lowrank.hpp"
#include "rlra/regression.hpp"
#include "rlra/sketch.hpp"
#include "rlra/streaming.hpp"

using namespace rlra;

namespace {

Matrix random_matrix(Index n, Index d, uint64_t seed) {
    Matrix A(n, d);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < d; ++j) A(i, j) = rng::gaussian(seed, i, j);
    return A;
}

Matrix random_rank_k(Index n, Index d, Index k, uint64_t seed) {
    return random_matrix(n, k, rng::derive(seed, 1)) * random_matrix(k, d, rng::derive(seed, 2));
}

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("criterion %2d %s  %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
}

double median_abs_of(std::vector<double>& v) {
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end(),
                     [](double a, double b) { return std::abs(a) < std::abs(b); });
    return std::abs(v[v.size() / 2]);
}

}  // namespace

TEST_CASE("criterion 1: exact-rank recovery across the four pipelines") {
    bool pass = true;
    double worst = 0.0;
    for (uint64_t t = 0; t < 20; ++t) {
        Matrix A = random_rank_k(60, 60, 3, rng::derive(700, t));
        const double a1 = entrywise_norm(A, 1.0);
        FitConfig cfg;
        cfg.seed = rng::derive(701, t);
        SketchSpec bspec{SketchKind::dense_stable,
                         preset_rows(3, SketchKind::dense_stable, Preset::practical), 1.0, 1.0, 0,
                         cfg.seed};
        const double costs[4] = {bicriteria_fit(A, 3, bspec).cost_l1,
                                 fit_input_sparsity(A, 3, cfg).cost_l1,
                                 fit_polyklogd(A, 3, cfg).cost_l1,
                                 cur_decompose(A, 3, cfg).cost_l1};
        for (double c : costs) {
            worst = std::max(worst, c / a1);
            if (c > 1e-6 * a1) pass = false;
        }
    }
    CHECK(pass);
    report(1, pass, "worst relative cost " + std::to_string(worst) + " (bound 1e-6)");
}

TEST_CASE("criterion 2: IRLS within 1+1e-3 of the subset-enumeration oracle") {
    bool pass = true;
    double worst = 1.0;
    for (uint64_t t = 0; t < 200; ++t) {
        const Index n = 4 + static_cast<Index>(rng::derive(810, t, 1) % 9);
        const Index d = 1 + static_cast<Index>(rng::derive(810, t, 2) % std::min<Index>(3, n - 1));
        Matrix A = random_matrix(n, d, rng::derive(810, t, 3));
        Vector b(n);
        for (Index i = 0; i < n; ++i) b(i) = rng::gaussian(rng::derive(810, t, 4), i, 0);
        RegressionResult oracle = l1_regress_oracle(A, b);
        RegressionResult irls = l1_regress(A, b);
        const double rel = oracle.cost > 0 ? irls.cost / oracle.cost : 1.0;
        worst = std::max(worst, rel);
        if (irls.cost > (1.0 + 1e-3) * oracle.cost + 1e-12) pass = false;
    }
    CHECK(pass);
    report(2, pass, "worst cost ratio vs oracle " + std::to_string(worst) + " (bound 1.001)");
}

TEST_CASE("criterion 3: lewis-weight sampling is an l1 subspace embedding") {
    LewisState ident = lewis_weights(Matrix::Identity(20, 20), 1.0);
    const bool ident_ok = (ident.weights - Vector::Ones(20)).cwiseAbs().maxCoeff() == 0.0;

    Matrix A = random_matrix(500, 8, 820);
    LewisState lw = lewis_weights(A, 1.0);
    const bool resid_ok = lw.fixed_point_residual <= 1e-8;

    int ok = 0, total = 0;
    for (uint64_t trial = 0; trial < 20; ++trial) {
        SamplingMatrix S = lewis_sampler(lw, 200, rng::derive(821, trial));
        Matrix SA = S.apply_rows(A);
        for (uint64_t t = 0; t < 100; ++t) {
            Vector x(8);
            for (Index i = 0; i < 8; ++i) x(i) = rng::gaussian(rng::derive(822, trial, t), i, 0);
            const double full = (A * x).lpNorm<1>();
            const double samp = (SA * x).lpNorm<1>();
            ++total;
            if (samp >= 0.5 * full && samp <= 2.0 * full) ++ok;
        }
    }
    const bool sandwich_ok = ok >= static_cast<int>(0.95 * total);
    const bool pass = ident_ok && resid_ok && sandwich_ok;
    CHECK(pass);
    report(3, pass,
           "sandwich " + std::to_string(ok) + "/" + std::to_string(total) + ", residual " +
               std::to_string(lw.fixed_point_residual) + ", identity exact " +
               (ident_ok ? "yes" : "no"));
}

TEST_CASE("criterion 4: dense cauchy no-dilation and no-contraction statistics") {
    const Index n = 200, d = 50, k = 5, m = 20;
    Matrix M = random_matrix(n, d, 830);
    const double m1 = entrywise_norm(M, 1.0);
    int dilation_ok = 0;
    for (uint64_t trial = 0; trial < 100; ++trial) {
        SketchSpec spec{SketchKind::dense_stable, m, 1.0, 1.0 / static_cast<double>(m), 0,
                        rng::derive(831, trial)};
        if (entrywise_norm(make_dense_sketch(spec, n) * M, 1.0) <=
            8.0 * std::log(static_cast<double>(d)) * m1)
            ++dilation_ok;
    }

    const Index mc = static_cast<Index>(std::ceil(4.0 * k * std::log2(static_cast<double>(k))));
    Matrix U = svd(random_matrix(n, k, 832)).left_vectors;
    int contraction_ok = 0;
    for (uint64_t trial = 0; trial < 100; ++trial) {
        SketchSpec spec{SketchKind::dense_stable, mc, 1.0, 1.0 / static_cast<double>(mc), 0,
                        rng::derive(833, trial)};
        Matrix SU = make_dense_sketch(spec, n) * U;
        double worst = std::numeric_limits<double>::infinity();
        for (uint64_t t = 0; t < 200; ++t) {
            Vector x(k);
            for (Index i = 0; i < k; ++i) x(i) = rng::gaussian(rng::derive(834, trial, t), i, 0);
            x /= x.norm();
            worst = std::min(worst, (SU * x).lpNorm<1>() / (U * x).lpNorm<1>());
        }
        if (worst >= 0.1) ++contraction_ok;
    }
    const bool pass = dilation_ok >= 95 && contraction_ok >= 95;
    CHECK(pass);
    report(4, pass,
           "no-dilation " + std::to_string(dilation_ok) + "/100, no-contraction " +
               std::to_string(contraction_ok) + "/100");
}

TEST_CASE("criterion 5: block-diagonal separation against the svd baseline") {
    // Every sub-bound must hold at every n; the ratio-growth clause compares
    // the divergence between the endpoints of the sweep.
    const uint64_t seed = 8;
    bool bounds_ok = true;
    double ratio20 = 0.0, ratio100 = 0.0;
    for (Index n : {20, 40, 60, 80, 100}) {
        InstanceSpec sp;
        sp.kind = InstanceKind::heuristic_counterexample;
        sp.n = n;
        sp.gamma = 0.5;
        sp.eps = 0.25;
        Matrix A = gen_instance(sp);
        FitConfig cfg;
        cfg.seed = seed;
        const double baseline = run_algo("svd-baseline", A, 3, cfg).cost_l1;
        const double ours = fit_polyklogd(A, 3, cfg).cost_l1;
        const double nn = static_cast<double>(n);
        if (baseline < 0.9 * nn * nn) bounds_ok = false;
        if (ours > 30.0 * std::pow(nn, 1.75)) bounds_ok = false;
        if (n == 20) ratio20 = baseline / ours;
        if (n == 100) ratio100 = baseline / ours;
    }
    const bool growth_ok = ratio100 >= 3.0 * ratio20;
    const bool pass = bounds_ok && growth_ok;
    CHECK(pass);
    report(5, pass,
           "bounds " + std::string(bounds_ok ? "ok" : "violated") + ", ratio growth " +
               std::to_string(ratio100 / ratio20) + "x (threshold 3x)");
}

TEST_CASE("criterion 6: row-subset obstruction at d=16") {
    InstanceSpec sp;
    sp.kind = InstanceKind::subset_hard;
    sp.d = 16;
    Matrix A = gen_instance(sp);
    const double opt = 15.0;

    double restricted_min = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < A.rows(); ++i) {
        Vector v = A.row(i).transpose();
        double total = 0.0;
        for (Index j = 0; j < A.rows(); ++j)
            total += l1_regress_oracle(v, A.row(j).transpose()).cost;
        restricted_min = std::min(restricted_min, total);
    }
    const bool restricted_ok = restricted_min >= 1.5 * opt;

    Matrix u = A.col(0);
    Matrix V = multi_response_l1(u, A);
    const double unrestricted = entrywise_norm(u * V - A, 1.0);
    const bool unrestricted_ok = unrestricted <= 1.1 * opt;

    const bool pass = restricted_ok && unrestricted_ok;
    CHECK(pass);
    report(6, pass,
           "restricted min " + std::to_string(restricted_min) + " vs 1.5*opt=" +
               std::to_string(1.5 * opt) + "; unrestricted " + std::to_string(unrestricted));
}

TEST_CASE("criterion 7: streaming equals batch on 50 turnstile streams") {
    bool pass = true;
    double worst = 0.0;
    for (uint64_t trial = 0; trial < 50; ++trial) {
        const Index n = 40, d = 40, k = 2;
        TurnstileState st = turnstile_init(n, d, k, rng::derive(840, trial), true);
        Matrix A = Matrix::Zero(n, d);
        // 450 random updates plus 25 cancellation pairs
        for (uint64_t t = 0; t < 450; ++t) {
            const Index x = static_cast<Index>(rng::derive(841, trial, t, 1) % n);
            const Index y = static_cast<Index>(rng::derive(841, trial, t, 2) % d);
            const double c = rng::gaussian(rng::derive(842, trial), t, 0);
            turnstile_update(st, x, y, c);
            A(x, y) += c;
        }
        for (uint64_t t = 0; t < 25; ++t) {
            const Index x = static_cast<Index>(rng::derive(843, trial, t, 1) % n);
            const Index y = static_cast<Index>(rng::derive(843, trial, t, 2) % d);
            const double c = rng::gaussian(rng::derive(844, trial), t, 0);
            turnstile_update(st, x, y, c);
            turnstile_update(st, x, y, -c);
        }
        StreamFactors streamed = turnstile_finalize(st);

        TurnstileState batch = turnstile_init(n, d, k, rng::derive(840, trial), true);
        Matrix Smat = batch.genS.materialize(n);
        Matrix T1mat = batch.genT1.materialize(n);
        Matrix Rmat = batch.genR.materialize(d).transpose();
        Matrix T2mat = batch.genT2.materialize(d).transpose();
        batch.L = T1mat * A * Rmat;
        batch.N = (Smat * A) * T2mat;
        batch.M = (T1mat * A) * T2mat;
        batch.D = Smat * A;
        batch.C = A * Rmat;
        StreamFactors direct = turnstile_finalize(batch);

        const double scale = std::max(1.0, direct.Vstar.cwiseAbs().maxCoeff());
        const double diff = (streamed.Vstar - direct.Vstar).cwiseAbs().maxCoeff() / scale;
        worst = std::max(worst, diff);
        if (diff > 1e-9) pass = false;
    }

    // exact cancellation drives the accumulators back to zero
    TurnstileState st = turnstile_init(8, 8, 1, 1, false);
    turnstile_update(st, 3, 4, 2.5);
    turnstile_update(st, 3, 4, -2.5);
    if (st.L.cwiseAbs().maxCoeff() > 1e-12 || st.D.cwiseAbs().maxCoeff() > 1e-12) pass = false;

    CHECK(pass);
    report(7, pass, "worst stream-vs-batch deviation " + std::to_string(worst) + " (bound 1e-9)");
}

TEST_CASE("criterion 8: distributed partition invariance and word budget") {
    const Index n = 40, d = 30, k = 3;
    Matrix A = random_matrix(n, d, 850);
    const double lk = std::log2(static_cast<double>(k) + 2.0);
    auto budget = [&](Index s, bool dec) {
        const double logk_term =
            std::ceil(std::log2(std::max(1.0, static_cast<double>(k))) + 1.0);
        return static_cast<double>(s) * (64.0 * k * k * lk * lk * lk + k * d * logk_term +
                                         (dec ? static_cast<double>(k * n) : 0.0));
    };

    bool pass = true;
    Matrix reference;
    for (Index s : {1, 2, 4}) {
        Partition p = make_arbitrary_partition(A, s, 851 + static_cast<uint64_t>(s));
        DistResult r = run_arbitrary_partition(p, k, 852, false);
        if (static_cast<double>(r.log.total_words()) > budget(s, false)) pass = false;
        if (reference.size() == 0)
            reference = r.Vstar;
        else if ((r.Vstar - reference).cwiseAbs().maxCoeff() >
                 1e-12 * std::max(1.0, reference.cwiseAbs().maxCoeff()))
            pass = false;
    }
    // a second, different partition of the same input
    Partition alt = make_arbitrary_partition(A, 4, 999);
    DistResult ralt = run_arbitrary_partition(alt, k, 852, false);
    if ((ralt.Vstar - reference).cwiseAbs().maxCoeff() >
        1e-12 * std::max(1.0, reference.cwiseAbs().maxCoeff()))
        pass = false;

    // decomposition variant also fits its budget
    Partition pdec = make_arbitrary_partition(A, 2, 853);
    DistResult rdec = run_arbitrary_partition(pdec, k, 852, true);
    if (static_cast<double>(rdec.log.total_words()) > budget(2, true)) pass = false;

    // s = 1 equals the centralized turnstile pipeline
    TurnstileState st = turnstile_init(n, d, k, 852, false);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < d; ++j) turnstile_update(st, i, j, A(i, j));
    StreamFactors central = turnstile_finalize(st);
    if ((central.Vstar - reference).cwiseAbs().maxCoeff() >
        1e-9 * std::max(1.0, reference.cwiseAbs().maxCoeff()))
        pass = false;

    CHECK(pass);
    report(8, pass, "V* invariant across partitions, budgets at c=64 satisfied");
}

TEST_CASE("criterion 9: CUR structure and cost on planted instances") {
    bool pass = true;
    int cost_ok = 0;
    for (uint64_t t = 0; t < 20; ++t) {
        InstanceSpec sp;
        sp.kind = InstanceKind::planted;
        sp.n = 30;
        sp.d = 30;
        sp.k = 2;
        sp.seed = rng::derive(860, t);
        Matrix A = gen_instance(sp);
        FitConfig cfg;
        cfg.seed = rng::derive(861, t);
        CurFactors cur = cur_decompose(A, 2, cfg);

        for (size_t j = 0; j < cur.col_indices.size(); ++j) {
            Vector expect = cur.col_rescale[j] * A.col(cur.col_indices[j]);
            if ((cur.C.col(static_cast<Index>(j)) - expect).lpNorm<1>() != 0.0) pass = false;
        }
        for (size_t i = 0; i < cur.row_indices.size(); ++i) {
            Vector expect = cur.row_rescale[i] * A.row(cur.row_indices[i]).transpose();
            if ((cur.R.row(static_cast<Index>(i)).transpose() - expect).lpNorm<1>() != 0.0)
                pass = false;
        }
        SvdResult s = svd(cur.C * cur.U * cur.R);
        if (s.singular_values.size() > 2 && s.singular_values(2) > 1e-9 * s.singular_values(0))
            pass = false;

        if (cur.cost_l1 <= 10.0 * fit_polyklogd(A, 2, cfg).cost_l1) ++cost_ok;
    }
    if (cost_ok < 20) pass = false;
    CHECK(pass);
    report(9, pass, "provenance exact, rank <= k, cost bound " + std::to_string(cost_ok) + "/20");
}

TEST_CASE("criterion 10: EMD embedding sandwich on delta=4 grids") {
    bool pass = true;
    double worst_upper = 0.0;
    for (uint64_t t = 0; t < 50; ++t) {
        Vector x = Vector::Zero(16), y = Vector::Zero(16);
        for (int u = 0; u < 15; ++u) {
            x(static_cast<Index>(rng::derive(870, t, u, 1) % 16)) += 1.0;
            y(static_cast<Index>(rng::derive(870, t, u, 2) % 16)) += 1.0;
        }
        const double emd = eemd_exact(x - y, 4);
        const double dist = emd_embedded_distance(emd_embed(x, 4), emd_embed(y, 4));
        if (emd == 0.0) {
            if (dist != 0.0) pass = false;
            continue;
        }
        if (dist < emd - 1e-9) pass = false;
        if (dist > 2.0 * std::log2(4.0) * emd + 1e-9) pass = false;
        worst_upper = std::max(worst_upper, dist / emd);
    }
    // the mass-imbalance term routes through the coarsest level
    Vector lone = Vector::Zero(16);
    lone(5) = 1.0;
    const double imb = emd_embedded_distance(emd_embed(lone, 4), emd_embed(Vector::Zero(16), 4));
    if (imb < 4.0 || imb > 16.0) pass = false;

    CHECK(pass);
    report(10, pass, "worst embedded/EMD ratio " + std::to_string(worst_upper) + " (bound 4)");
}

TEST_CASE("criterion 11: p-stable generators match their distributional laws") {
    std::vector<double> cauchy(100000);
    for (size_t t = 0; t < cauchy.size(); ++t)
        cauchy[t] = rng::sample_stable(1.0, rng::u01(880, t, 0, 0), rng::u01(880, t, 0, 1));
    const double med = median_abs_of(cauchy);
    const bool cauchy_ok = std::abs(med - 1.0) <= 0.03;

    std::vector<double> single(100000), comb(100000);
    for (size_t t = 0; t < single.size(); ++t) {
        const double x1 = rng::sample_stable(1.5, rng::u01(881, t, 1, 0), rng::u01(881, t, 1, 1));
        const double x2 = rng::sample_stable(1.5, rng::u01(881, t, 2, 0), rng::u01(881, t, 2, 1));
        single[t] = x1;
        comb[t] = x1 + 2.0 * x2;
    }
    const double expect = std::pow(1.0 + std::pow(2.0, 1.5), 1.0 / 1.5) * median_abs_of(single);
    const double got = median_abs_of(comb);
    const bool stable_ok = std::abs(got - expect) / expect <= 0.10;

    std::vector<double> limited;
    limited.reserve(100000);
    for (uint64_t row = 0; row < 500; ++row) {
        Vector r = limited_indep_row(rng::derive(882, row), 8, 200, 1.0);
        for (Index i = 0; i < r.size(); ++i) limited.push_back(r(i));
    }
    const double lim_med = median_abs_of(limited);
    const bool limited_ok = std::abs(lim_med - 1.0) <= 0.05;

    const bool pass = cauchy_ok && stable_ok && limited_ok;
    CHECK(pass);
    report(11, pass,
           "cauchy median " + std::to_string(med) + ", stability ratio " +
               std::to_string(got / expect) + ", limited median " + std::to_string(lim_med));
}
