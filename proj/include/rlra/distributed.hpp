#ifndef RLRA_DISTRIBUTED_HPP
#define RLRA_DISTRIBUTED_HPP

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rlra/lowrank.hpp"
#include "rlra/types.hpp"

namespace rlra {

enum class PartitionMode { arbitrary, row };

/// Input split across machines: arbitrary mode holds same-shape summands of
/// A, row mode holds stacked row blocks.
struct Partition {
    PartitionMode mode = PartitionMode::arbitrary;
    std::vector<Matrix> parts;

    void validate() const;
    Index machines() const { return static_cast<Index>(parts.size()); }
    Matrix assemble() const;  // sum or vertical concatenation
};

Partition make_arbitrary_partition(const Matrix& A, Index s, uint64_t seed);
Partition make_row_partition(const Matrix& A, Index s);

struct CommMessage {
    int sender;    // -1 is the coordinator
    int receiver;  // -1 is the coordinator
    std::string tag;
    Index words;
};

struct CommLog {
    std::vector<CommMessage> messages;

    Index total_words() const;
    void record(int sender, int receiver, const std::string& tag, Index words) {
        messages.push_back({sender, receiver, tag, words});
    }
    void write_csv(std::ostream& os) const;  // sender,receiver,tag,words
};

struct DistResult {
    Matrix Vstar;                    // k x d
    std::optional<Matrix> Ustar;     // n x k when decomposition requested
    std::optional<double> cost_l1;   // set when decomposition requested
    CommLog log;
};

/// Machines sketch their summands with shared sketches from the broadcast
/// seed; the coordinator sums L, N, M, solves the core, broadcasts Xhat;
/// machines return their V* (and U*) contributions which sum exactly.
DistResult run_arbitrary_partition(const Partition& parts, Index k, uint64_t seed,
                                   bool want_decomposition, Preset preset = Preset::practical);

/// Row-partition protocol: machine i first replaces its block by the l1
/// row-fit B_i onto S'_i A_i, then sketches B_i. Sketch blocks are derived
/// from global row offsets so the concatenation matches one global sketch.
DistResult run_row_partition(const Partition& parts, Index k, uint64_t seed,
                             bool want_decomposition, Preset preset = Preset::practical);

}  // namespace rlra

#endif
