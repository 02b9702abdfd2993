#ifndef RLRA_INSTANCES_HPP
#define RLRA_INSTANCES_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "rlra/types.hpp"

namespace rlra {

enum class InstanceKind {
    cauchy_hard,
    subset_hard,
    ose_hard,
    heuristic_counterexample,
    planted,
    rank_exact,
};

InstanceKind instance_kind_from_string(const std::string& s);
std::string to_string(InstanceKind k);

struct InstanceSpec {
    InstanceKind kind = InstanceKind::rank_exact;
    Index n = 0, d = 0, k = 0;
    double gamma = 0.5;
    double eps = 0.25;
    Index delta = 0;  // grid side, emd instances
    uint64_t seed = 0;
    // planted construction knobs
    double outlier_density = 0.02;
    double outlier_scale = 10.0;

    void validate() const;  // throws listing the violated range
};

/// Deterministic instance constructions:
///   cauchy_hard(d):   ceil(ln d) * (first row all ones) + I_d
///   subset_hard(d):   (d-1) x d, first column all ones then the identity
///   ose_hard(n,k):    n x (k+n), [Gaussian block | I_n]
///   heuristic_counterexample(n,gamma,eps):
///                     (2n+2)^2 block diagonal of n^{2+gamma}, n^{1.5+eps},
///                     and two n x n all-ones blocks
///   planted(n,d,k):   rank-k Gaussian product plus sparse +-outliers
///   rank_exact(n,d,k): rank-k Gaussian product
Matrix gen_instance(const InstanceSpec& spec);

/// Upper bound on the optimal entrywise-l1 cost where the construction
/// provides one: ||E||_1 for planted, n^{1.5+eps} for the counterexample,
/// 0 for rank_exact.
std::optional<double> instance_opt_bound(const InstanceSpec& spec);

}  // namespace rlra

#endif
