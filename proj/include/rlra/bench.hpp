#ifndef RLRA_BENCH_HPP
#define RLRA_BENCH_HPP

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rlra/instances.hpp"
#include "rlra/lowrank.hpp"

namespace rlra {

struct BenchCell {
    std::string instance;
    std::string algo;
    Index k = 0;
    uint64_t seed = 0;
    double cost_l1 = 0.0;
    std::optional<double> opt_bound;
    std::optional<double> ratio;  // cost / opt_bound when opt_bound > 0
    double elapsed_ms = 0.0;
    std::optional<Index> comm_words;
};

struct BenchConfig {
    std::vector<InstanceSpec> instances;
    std::vector<std::string> algos;  // svd-baseline, bicriteria, input-sparsity,
                                     // polyklogd, cur, subset-enum, lp
    std::vector<Index> ks;
    std::vector<uint64_t> seeds;
    Preset preset = Preset::practical;
    double p = 1.0;
    Index subset_r = 2;
    bool record_timing = false;  // off by default so CSVs are byte-reproducible
};

BenchConfig load_bench_config(const std::string& path);

/// Runs every (instance, algo, k, seed) cell; rows come back sorted by that
/// key so repeated runs produce identical artifacts.
std::vector<BenchCell> run_benchmark(const BenchConfig& cfg);

void write_bench_csv(const std::vector<BenchCell>& cells, std::ostream& os);

/// One fit by algo tag; the entry point the CLI and benchmark share.
/// Throws std::invalid_argument for an unknown tag.
Factorization run_algo(const std::string& algo, const Matrix& A, Index k, const FitConfig& cfg,
                       Index subset_r = 2);

}  // namespace rlra

#endif
