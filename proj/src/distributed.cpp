#include "rlra/distributed.hpp"

#include <stdexcept>

#include "rlra/linalg.hpp"
#include "rlra/streaming.hpp"

namespace rlra {

void Partition::validate() const {
    if (parts.empty()) throw std::invalid_argument("Partition: no parts");
    if (mode == PartitionMode::arbitrary) {
        for (const Matrix& p : parts)
            if (p.rows() != parts[0].rows() || p.cols() != parts[0].cols())
                throw std::invalid_argument("Partition: arbitrary parts must share the shape of A");
    } else {
        for (const Matrix& p : parts) {
            if (p.cols() != parts[0].cols())
                throw std::invalid_argument("Partition: row parts must share column count");
            if (p.rows() < 1) throw std::invalid_argument("Partition: empty row block");
        }
    }
}

Matrix Partition::assemble() const {
    validate();
    if (mode == PartitionMode::arbitrary) {
        Matrix A = parts[0];
        for (size_t i = 1; i < parts.size(); ++i) A += parts[i];
        return A;
    }
    Index n = 0;
    for (const Matrix& p : parts) n += p.rows();
    Matrix A(n, parts[0].cols());
    Index off = 0;
    for (const Matrix& p : parts) {
        A.middleRows(off, p.rows()) = p;
        off += p.rows();
    }
    return A;
}

Partition make_arbitrary_partition(const Matrix& A, Index s, uint64_t seed) {
    if (s < 1) throw std::invalid_argument("make_arbitrary_partition: s must be >= 1");
    Partition p;
    p.mode = PartitionMode::arbitrary;
    p.parts.assign(static_cast<size_t>(s), Matrix::Zero(A.rows(), A.cols()));
    for (Index i = 0; i < A.rows(); ++i)
        for (Index j = 0; j < A.cols(); ++j) {
            const Index m = static_cast<Index>(rng::derive(seed, 7, i, j) % static_cast<uint64_t>(s));
            p.parts[static_cast<size_t>(m)](i, j) = A(i, j);
        }
    return p;
}

Partition make_row_partition(const Matrix& A, Index s) {
    if (s < 1 || s > A.rows()) throw std::invalid_argument("make_row_partition: bad machine count");
    Partition p;
    p.mode = PartitionMode::row;
    const Index base = A.rows() / s, extra = A.rows() % s;
    Index off = 0;
    for (Index i = 0; i < s; ++i) {
        const Index ni = base + (i < extra ? 1 : 0);
        p.parts.push_back(A.middleRows(off, ni));
        off += ni;
    }
    return p;
}

Index CommLog::total_words() const {
    Index w = 0;
    for (const CommMessage& m : messages) w += m.words;
    return w;
}

void CommLog::write_csv(std::ostream& os) const {
    os << "sender,receiver,tag,words\n";
    for (const CommMessage& m : messages)
        os << m.sender << ',' << m.receiver << ',' << m.tag << ',' << m.words << '\n';
}

namespace {

constexpr int kCoordinator = -1;
constexpr Index kSeedWords = 1;  // ceil(64 bits / word)

using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

// Machines carry their sketch products in extended precision so the summed
// summaries agree across different partitions of the same input to well
// below the documented 1e-12 invariance tolerance.
LongMatrix widen(const Matrix& A) { return A.cast<long double>(); }
Matrix narrow(const LongMatrix& A) { return A.cast<double>(); }

struct CoreSolution {
    Matrix Uhat;  // r x k
    Matrix Vh;    // k x s  (Sigma V^T)
};

CoreSolution split_core(const Matrix& Xhat, Index k) {
    SvdResult s = svd(Xhat);
    const Index have = std::min<Index>(k, s.singular_values.size());
    CoreSolution cs;
    cs.Uhat = Matrix::Zero(Xhat.rows(), k);
    cs.Vh = Matrix::Zero(k, Xhat.cols());
    cs.Uhat.leftCols(have) = s.left_vectors.leftCols(have);
    cs.Vh.topRows(have) =
        s.singular_values.head(have).asDiagonal() * s.right_vectors.leftCols(have).transpose();
    return cs;
}

}  // namespace

DistResult run_arbitrary_partition(const Partition& parts, Index k, uint64_t seed,
                                   bool want_decomposition, Preset preset) {
    parts.validate();
    if (parts.mode != PartitionMode::arbitrary)
        throw std::invalid_argument("run_arbitrary_partition: wrong partition mode");
    const Index s = parts.machines();
    const Index n = parts.parts[0].rows(), d = parts.parts[0].cols();

    DistResult res;
    // same sketch family as the turnstile accumulators
    TurnstileState proto = turnstile_init(n, d, k, seed, false, preset);
    const SketchSizes sz = proto.sz;

    Matrix Smat = proto.genS.materialize(n);
    Matrix T1mat = proto.genT1.materialize(n);
    Matrix Rmat = proto.genR.materialize(d).transpose();    // d x r
    Matrix T2mat = proto.genT2.materialize(d).transpose();  // d x t2

    for (Index i = 0; i < s; ++i) res.log.record(kCoordinator, static_cast<int>(i), "seed", kSeedWords);

    Matrix L = Matrix::Zero(sz.t1, sz.r);
    Matrix N = Matrix::Zero(sz.s, sz.t2);
    Matrix M = Matrix::Zero(sz.t1, sz.t2);
    for (Index i = 0; i < s; ++i) {
        const Matrix& Ai = parts.parts[static_cast<size_t>(i)];
        Matrix Li = T1mat * Ai * Rmat;
        Matrix Ni = (Smat * Ai) * T2mat;
        Matrix Mi = (T1mat * Ai) * T2mat;
        res.log.record(static_cast<int>(i), kCoordinator, "L", Li.size());
        res.log.record(static_cast<int>(i), kCoordinator, "N", Ni.size());
        res.log.record(static_cast<int>(i), kCoordinator, "M", Mi.size());
        L += Li;
        N += Ni;
        M += Mi;
    }

    Matrix Xhat = rank_constrained_solve(M, L, N, k);
    for (Index i = 0; i < s; ++i) res.log.record(kCoordinator, static_cast<int>(i), "Xhat", Xhat.size());

    CoreSolution cs = split_core(Xhat, k);
    Matrix Vstar = Matrix::Zero(k, d);
    Matrix Ustar = Matrix::Zero(n, k);
    for (Index i = 0; i < s; ++i) {
        const Matrix& Ai = parts.parts[static_cast<size_t>(i)];
        Matrix Vi = cs.Vh * (Smat * Ai);  // k x d
        res.log.record(static_cast<int>(i), kCoordinator, "Vstar", Vi.size());
        Vstar += Vi;
        if (want_decomposition) {
            Matrix Ui = (Ai * Rmat) * cs.Uhat;  // n x k
            res.log.record(static_cast<int>(i), kCoordinator, "Ustar", Ui.size());
            Ustar += Ui;
        }
    }

    res.Vstar = std::move(Vstar);
    if (want_decomposition) {
        res.Ustar = std::move(Ustar);
        res.cost_l1 = entrywise_norm(*res.Ustar * res.Vstar - parts.assemble(), 1.0);
    }
    return res;
}

DistResult run_row_partition(const Partition& parts, Index k, uint64_t seed,
                             bool want_decomposition, Preset preset) {
    parts.validate();
    if (parts.mode != PartitionMode::row)
        throw std::invalid_argument("run_row_partition: wrong partition mode");
    const Index s = parts.machines();
    const Index d = parts.parts[0].cols();
    Index n = 0;
    for (const Matrix& p : parts.parts) n += p.rows();

    DistResult res;
    TurnstileState proto = turnstile_init(n, d, k, seed, false, preset);
    const SketchSizes sz = proto.sz;
    DenseSketchGen genSp(SketchSpec{SketchKind::dense_stable,
                                    preset_rows(k, SketchKind::dense_stable, preset), 1.0, 1.0,
                                    stream_indep_degree(d, preset), seed},
                         tags::kSprime);

    Matrix Rmat = proto.genR.materialize(d).transpose();    // d x r
    Matrix T2mat = proto.genT2.materialize(d).transpose();  // d x t2

    for (Index i = 0; i < s; ++i) res.log.record(kCoordinator, static_cast<int>(i), "seed", kSeedWords);

    // machine-local state kept for the second round
    std::vector<Matrix> B(static_cast<size_t>(s)), Sblk(static_cast<size_t>(s));
    std::vector<Index> offset(static_cast<size_t>(s));

    Matrix L = Matrix::Zero(sz.t1, sz.r);
    Matrix N = Matrix::Zero(sz.s, sz.t2);
    Matrix M = Matrix::Zero(sz.t1, sz.t2);
    Index off = 0;
    for (Index i = 0; i < s; ++i) {
        const Matrix& Ai = parts.parts[static_cast<size_t>(i)];
        const Index ni = Ai.rows();
        offset[static_cast<size_t>(i)] = off;

        Matrix Spi(genSp.rows(), ni);
        Matrix Si(sz.s, ni);
        Matrix T1i(sz.t1, ni);
        for (Index j = 0; j < ni; ++j) {
            Spi.col(j) = genSp.column(off + j);
            Si.col(j) = proto.genS.column(off + j);
            T1i.col(j) = proto.genT1.column(off + j);
        }

        Matrix SpA = Spi * Ai;
        Matrix Y = fit_rows_l1(SpA, Ai, L1Options{});
        Matrix Bi = Y * SpA;  // ni x d

        Matrix Li = T1i * Bi * Rmat;
        Matrix Ni = (Si * Bi) * T2mat;
        Matrix Mi = (T1i * Bi) * T2mat;
        res.log.record(static_cast<int>(i), kCoordinator, "L", Li.size());
        res.log.record(static_cast<int>(i), kCoordinator, "N", Ni.size());
        res.log.record(static_cast<int>(i), kCoordinator, "M", Mi.size());
        L += Li;
        N += Ni;
        M += Mi;

        B[static_cast<size_t>(i)] = std::move(Bi);
        Sblk[static_cast<size_t>(i)] = std::move(Si);
        off += ni;
    }

    Matrix Xhat = rank_constrained_solve(M, L, N, k);
    for (Index i = 0; i < s; ++i) res.log.record(kCoordinator, static_cast<int>(i), "Xhat", Xhat.size());

    CoreSolution cs = split_core(Xhat, k);
    Matrix Vstar = Matrix::Zero(k, d);
    Matrix Ustar = Matrix::Zero(n, k);
    for (Index i = 0; i < s; ++i) {
        const Matrix& Bi = B[static_cast<size_t>(i)];
        Matrix Vi = cs.Vh * (Sblk[static_cast<size_t>(i)] * Bi);  // k x d
        res.log.record(static_cast<int>(i), kCoordinator, "Vstar", Vi.size());
        Vstar += Vi;
        if (want_decomposition) {
            Matrix Ui = (Bi * Rmat) * cs.Uhat;  // ni x k
            res.log.record(static_cast<int>(i), kCoordinator, "Ustar", Ui.size());
            Ustar.middleRows(offset[static_cast<size_t>(i)], Bi.rows()) = Ui;
        }
    }

    res.Vstar = std::move(Vstar);
    if (want_decomposition) {
        res.Ustar = std::move(Ustar);
        res.cost_l1 = entrywise_norm(*res.Ustar * res.Vstar - parts.assemble(), 1.0);
    }
    return res;
}

}  // namespace rlra
