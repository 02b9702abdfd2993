#include "rlra/bench.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "rlra/io.hpp"
#include "rlra/linalg.hpp"

namespace rlra {

Factorization run_algo(const std::string& algo, const Matrix& A, Index k, const FitConfig& cfg,
                       Index subset_r) {
    if (algo == "svd-baseline") {
        Matrix Ak = svd_truncate(A, k);
        SvdResult s = svd(Ak);
        Factorization f;
        f.U = s.left_vectors.leftCols(std::min<Index>(k, s.left_vectors.cols()));
        f.V = s.singular_values.head(f.U.cols()).asDiagonal() *
              s.right_vectors.leftCols(f.U.cols()).transpose();
        if (f.U.cols() < k) {
            Matrix U = Matrix::Zero(A.rows(), k), V = Matrix::Zero(k, A.cols());
            U.leftCols(f.U.cols()) = f.U;
            V.topRows(f.V.rows()) = f.V;
            f.U = U;
            f.V = V;
        }
        f.k = k;
        f.seed = cfg.seed;
        f.algo_tag = "svd-baseline";
        f.cost_l1 = factor_cost(f.U, f.V, A, cfg.p);
        return f;
    }
    if (algo == "bicriteria") {
        SketchSpec spec{SketchKind::dense_stable, preset_rows(k, SketchKind::dense_stable, cfg.preset),
                        cfg.p, 1.0, cfg.w, cfg.seed};
        return bicriteria_fit(A, k, spec);
    }
    if (algo == "input-sparsity") return fit_input_sparsity(A, k, cfg);
    if (algo == "polyklogd") return fit_polyklogd(A, k, cfg);
    if (algo == "subset-enum") return fit_subset_enum(A, k, std::max<Index>(subset_r, k), cfg);
    if (algo == "lp") return fit_lp(A, k, cfg.p == 1.0 ? 1.5 : cfg.p, cfg);
    if (algo == "cur") {
        CurFactors c = cur_decompose(A, k, cfg);
        Factorization f;
        f.U = c.C * c.U;
        f.V = c.R;
        f.k = k;
        f.seed = cfg.seed;
        f.algo_tag = "cur";
        f.cost_l1 = c.cost_l1;
        return f;
    }
    throw std::invalid_argument("unknown algo tag: " + algo);
}

BenchConfig load_bench_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    in >> j;

    BenchConfig cfg;
    for (const auto& ij : j.at("instances")) {
        InstanceSpec spec;
        spec.kind = instance_kind_from_string(ij.at("kind").get<std::string>());
        spec.n = ij.value("n", 0);
        spec.d = ij.value("d", 0);
        spec.k = ij.value("k", 0);
        spec.gamma = ij.value("gamma", 0.5);
        spec.eps = ij.value("eps", 0.25);
        spec.seed = ij.value("seed", 0);
        spec.outlier_density = ij.value("outlier_density", 0.02);
        spec.outlier_scale = ij.value("outlier_scale", 10.0);
        spec.validate();
        cfg.instances.push_back(spec);
    }
    cfg.algos = j.value("algos", std::vector<std::string>{});
    for (const auto& kk : j.at("ks")) cfg.ks.push_back(kk.get<Index>());
    for (const auto& ss : j.at("seeds")) cfg.seeds.push_back(ss.get<uint64_t>());
    if (j.contains("preset"))
        cfg.preset = j["preset"] == "theory" ? Preset::theory : Preset::practical;
    cfg.p = j.value("p", 1.0);
    cfg.subset_r = j.value("subset_r", 2);
    cfg.record_timing = j.value("record_timing", false);
    return cfg;
}

std::vector<BenchCell> run_benchmark(const BenchConfig& cfg) {
    std::vector<BenchCell> cells;
    for (const InstanceSpec& spec : cfg.instances) {
        const Matrix A = gen_instance(spec);
        const std::optional<double> opt = instance_opt_bound(spec);
        for (const std::string& algo : cfg.algos)
            for (Index k : cfg.ks)
                for (uint64_t seed : cfg.seeds) {
                    FitConfig fc;
                    fc.seed = seed;
                    fc.preset = cfg.preset;
                    fc.p = cfg.p;

                    const auto t0 = std::chrono::steady_clock::now();
                    Factorization f = run_algo(algo, A, k, fc, cfg.subset_r);
                    const auto t1 = std::chrono::steady_clock::now();

                    BenchCell cell;
                    cell.instance = to_string(spec.kind);
                    cell.algo = algo;
                    cell.k = k;
                    cell.seed = seed;
                    cell.cost_l1 = f.cost_l1;
                    cell.opt_bound = opt;
                    if (opt && *opt > 0.0) cell.ratio = f.cost_l1 / *opt;
                    cell.elapsed_ms =
                        cfg.record_timing
                            ? std::chrono::duration<double, std::milli>(t1 - t0).count()
                            : 0.0;
                    cells.push_back(std::move(cell));
                }
    }
    std::sort(cells.begin(), cells.end(), [](const BenchCell& a, const BenchCell& b) {
        return std::tie(a.instance, a.algo, a.k, a.seed) < std::tie(b.instance, b.algo, b.k, b.seed);
    });
    return cells;
}

void write_bench_csv(const std::vector<BenchCell>& cells, std::ostream& os) {
    os << "instance,algo_tag,k,seed,cost_l1,opt_bound,ratio,elapsed_ms,comm_words\n";
    for (const BenchCell& c : cells) {
        os << c.instance << ',' << c.algo << ',' << c.k << ',' << c.seed << ','
           << format_real(c.cost_l1) << ',';
        if (c.opt_bound) os << format_real(*c.opt_bound);
        os << ',';
        if (c.ratio) os << format_real(*c.ratio);
        os << ',' << format_real(c.elapsed_ms) << ',';
        if (c.comm_words) os << *c.comm_words;
        os << '\n';
    }
}

}  // namespace rlra
