#include "rlra/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rlra/bench.hpp"
#include "rlra/distributed.hpp"
#include "rlra/emd.hpp"
#include "rlra/instances.hpp"
#include "rlra/io.hpp"
#include "rlra/linalg.hpp"
#include "rlra/streaming.hpp"

namespace rlra {

namespace {

using nlohmann::json;

Preset parse_preset(const std::string& s) {
    if (s == "theory") return Preset::theory;
    if (s == "practical") return Preset::practical;
    throw std::invalid_argument("unknown preset: " + s);
}

int cmd_fit(const std::string& input, const std::string& algo, Index k, double p, uint64_t seed,
            const std::string& preset, Index subset_r, Index emd_delta, const std::string& out) {
    Matrix A = load_dense_csv(input);
    FitConfig cfg;
    cfg.seed = seed;
    cfg.preset = parse_preset(preset);
    cfg.p = p;

    const auto t0 = std::chrono::steady_clock::now();
    Factorization f;
    if (algo == "emd") {
        if (emd_delta < 1) throw std::invalid_argument("emd: --delta required");
        if (A.rows() != emd_delta * emd_delta)
            throw std::invalid_argument("emd: input must have delta^2 rows (one grid per column)");
        std::vector<Vector> cols;
        for (Index j = 0; j < A.cols(); ++j) cols.push_back(A.col(j));
        EmdFitResult r = fit_emd(cols, k, emd_delta, cfg);
        f = r.fac;
    } else if (algo == "lp") {
        f = fit_lp(A, k, p, cfg);
    } else {
        f = run_algo(algo, A, k, cfg, subset_r);
    }
    const auto t1 = std::chrono::steady_clock::now();

    json j{{"algorithm", f.algo_tag},
           {"k", f.k},
           {"p", p},
           {"seed", seed},
           {"cost_l1", f.cost_l1},
           {"elapsed_ms", std::chrono::duration<double, std::milli>(t1 - t0).count()}};
    if (!out.empty()) {
        save_dense_csv(f.U, out + ".U.csv", true);
        save_dense_csv(f.V, out + ".V.csv", true);
        j["factors_path"] = out;
    }
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_cur(const std::string& input, Index k, uint64_t seed, const std::string& preset,
            const std::string& out) {
    Matrix A = load_dense_csv(input);
    FitConfig cfg;
    cfg.seed = seed;
    cfg.preset = parse_preset(preset);
    CurFactors c = cur_decompose(A, k, cfg);

    json j{{"algorithm", "cur"},
           {"k", k},
           {"seed", seed},
           {"cost_l1", c.cost_l1},
           {"columns", c.col_indices},
           {"rows", c.row_indices}};
    if (!out.empty()) {
        save_dense_csv(c.C, out + ".C.csv", true);
        save_dense_csv(c.U, out + ".Ucur.csv", true);
        save_dense_csv(c.R, out + ".R.csv", true);
        j["factors_path"] = out;
    }
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_stream(const std::string& input, Index n, Index d, Index k, uint64_t seed,
               const std::string& mode, bool decomposition, const std::string& preset,
               const std::string& out) {
    const std::vector<StreamUpdate> updates = load_stream(input);
    StreamFactors sf;
    if (mode == "turnstile") {
        TurnstileState st = turnstile_init(n, d, k, seed, decomposition, parse_preset(preset));
        for (const StreamUpdate& u : updates) turnstile_update(st, u.x, u.y, u.c);
        sf = turnstile_finalize(st);
    } else if (mode == "row") {
        RowUpdateState st = rowupdate_init(n, d, k, seed, decomposition, parse_preset(preset));
        // consecutive lines sharing x form one row
        Index current = -1;
        Vector row = Vector::Zero(d);
        for (const StreamUpdate& u : updates) {
            if (u.x != current) {
                if (current >= 0) rowupdate_ingest(st, current, row);
                current = u.x;
                row.setZero();
            }
            row(u.y) += u.c;
        }
        if (current >= 0) rowupdate_ingest(st, current, row);
        sf = rowupdate_finalize(st);
    } else {
        throw std::invalid_argument("unknown stream mode: " + mode);
    }

    json j{{"mode", mode}, {"k", k}, {"seed", seed}, {"updates", updates.size()}};
    if (sf.Ustar) {
        Matrix A = Matrix::Zero(n, d);
        for (const StreamUpdate& u : updates) A(u.x, u.y) += u.c;
        j["cost_l1"] = entrywise_norm(*sf.Ustar * sf.Vstar - A, 1.0);
    }
    if (!out.empty()) {
        save_dense_csv(sf.Vstar, out + ".V.csv", true);
        if (sf.Ustar) save_dense_csv(*sf.Ustar, out + ".U.csv", true);
        j["factors_path"] = out;
    }
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_dist(const std::string& input, const std::string& mode, Index s, Index k, uint64_t seed,
             bool decomposition, const std::string& preset, const std::string& comm_out,
             const std::string& out) {
    Matrix A = load_dense_csv(input);
    Partition parts = mode == "row" ? make_row_partition(A, s)
                                    : make_arbitrary_partition(A, s, rng::derive(seed, 99));
    DistResult r = mode == "row"
                       ? run_row_partition(parts, k, seed, decomposition, parse_preset(preset))
                       : run_arbitrary_partition(parts, k, seed, decomposition, parse_preset(preset));

    json j{{"mode", mode}, {"machines", s}, {"k", k}, {"seed", seed},
           {"comm_words", r.log.total_words()}};
    if (r.cost_l1) j["cost_l1"] = *r.cost_l1;
    if (!comm_out.empty()) {
        std::ofstream os(comm_out);
        r.log.write_csv(os);
        j["comm_log"] = comm_out;
    }
    if (!out.empty()) {
        save_dense_csv(r.Vstar, out + ".V.csv", true);
        if (r.Ustar) save_dense_csv(*r.Ustar, out + ".U.csv", true);
        j["factors_path"] = out;
    }
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_gen(const std::string& kind, Index n, Index d, Index k, double gamma, double eps,
            uint64_t seed, const std::string& out) {
    InstanceSpec spec;
    spec.kind = instance_kind_from_string(kind);
    spec.n = n;
    spec.d = d;
    spec.k = k;
    spec.gamma = gamma;
    spec.eps = eps;
    spec.seed = seed;
    Matrix A = gen_instance(spec);
    if (out.empty()) {
        for (Index i = 0; i < A.rows(); ++i) {
            for (Index j = 0; j < A.cols(); ++j) {
                if (j) std::cout << ',';
                std::cout << format_real(A(i, j));
            }
            std::cout << '\n';
        }
    } else {
        save_dense_csv(A, out, true);
    }
    return 0;
}

int cmd_bench(const std::string& config, const std::string& out) {
    BenchConfig cfg = load_bench_config(config);
    std::vector<BenchCell> cells = run_benchmark(cfg);
    if (out.empty()) {
        write_bench_csv(cells, std::cout);
    } else {
        std::ofstream os(out);
        if (!os) throw std::runtime_error("cannot write " + out);
        write_bench_csv(cells, os);
    }
    return 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"l1/lp low-rank approximation toolkit"};
    app.require_subcommand(1);

    std::string input, out, algo = "polyklogd", preset = "practical", mode, kind, config, comm_out;
    Index k = 1, n = 0, d = 0, s = 2, subset_r = 2, emd_delta = 0;
    double p = 1.0, gamma = 0.5, eps = 0.25;
    uint64_t seed = 0;
    bool decomposition = false;

    CLI::App* fit = app.add_subcommand("fit", "rank-k fit of a dense CSV matrix");
    fit->add_option("input", input, "input CSV")->required();
    fit->add_option("--algo", algo, "bicriteria|input-sparsity|polyklogd|subset-enum|lp|emd|svd-baseline|cur");
    fit->add_option("--k", k, "target rank")->required();
    fit->add_option("--p", p, "norm exponent in [1,2)");
    fit->add_option("--seed", seed, "random seed");
    fit->add_option("--preset", preset, "theory|practical");
    fit->add_option("--subset-r", subset_r, "columns per subset (subset-enum)");
    fit->add_option("--delta", emd_delta, "grid side (emd)");
    fit->add_option("--out", out, "output prefix for factors");

    CLI::App* cur = app.add_subcommand("cur", "CUR decomposition");
    cur->add_option("input", input)->required();
    cur->add_option("--k", k)->required();
    cur->add_option("--seed", seed);
    cur->add_option("--preset", preset);
    cur->add_option("--out", out);

    CLI::App* stream = app.add_subcommand("stream", "replay an update stream");
    stream->add_option("input", input, "stream file: lines `x y c`")->required();
    stream->add_option("--n", n)->required();
    stream->add_option("--d", d)->required();
    stream->add_option("--k", k)->required();
    stream->add_option("--seed", seed);
    stream->add_option("--mode", mode, "turnstile|row")->default_val("turnstile");
    stream->add_flag("--decomposition", decomposition);
    stream->add_option("--preset", preset);
    stream->add_option("--out", out);

    CLI::App* dist = app.add_subcommand("dist", "simulated distributed protocol");
    dist->add_option("input", input)->required();
    dist->add_option("--mode", mode, "arbitrary|row")->default_val("arbitrary");
    dist->add_option("--s", s, "machine count");
    dist->add_option("--k", k)->required();
    dist->add_option("--seed", seed);
    dist->add_flag("--decomposition", decomposition);
    dist->add_option("--preset", preset);
    dist->add_option("--comm-out", comm_out, "communication log CSV");
    dist->add_option("--out", out);

    CLI::App* gen = app.add_subcommand("gen", "hard-instance generator");
    gen->add_option("--kind", kind)->required();
    gen->add_option("--n", n);
    gen->add_option("--d", d);
    gen->add_option("--k", k);
    gen->add_option("--gamma", gamma);
    gen->add_option("--eps", eps);
    gen->add_option("--seed", seed);
    gen->add_option("--out", out);

    CLI::App* bench = app.add_subcommand("bench", "benchmark runner");
    bench->add_option("config", config, "JSON config")->required();
    bench->add_option("--out", out, "output CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (fit->parsed()) return cmd_fit(input, algo, k, p, seed, preset, subset_r, emd_delta, out);
        if (cur->parsed()) return cmd_cur(input, k, seed, preset, out);
        if (stream->parsed())
            return cmd_stream(input, n, d, k, seed, mode, decomposition, preset, out);
        if (dist->parsed())
            return cmd_dist(input, mode, s, k, seed, decomposition, preset, comm_out, out);
        if (gen->parsed()) return cmd_gen(kind, n, d, k, gamma, eps, seed, out);
        if (bench->parsed()) return cmd_bench(config, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace rlra
