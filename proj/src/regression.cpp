#include "rlra/regression.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rlra/linalg.hpp"

namespace rlra {

namespace {

double residual_cost(const Matrix& A, const Vector& x, const Vector& b, double p) {
    Vector r = A * x - b;
    if (p == 1.0) return r.lpNorm<1>();
    double acc = 0.0;
    for (Index i = 0; i < r.size(); ++i) acc += std::pow(std::abs(r(i)), p);
    return std::pow(acc, 1.0 / p);
}

}  // namespace

RegressionResult l1_regress(const Matrix& A, const Vector& b, double p, double tol,
                            int max_iters) {
    if (A.rows() != b.size()) throw std::invalid_argument("l1_regress: shape mismatch");
    if (!(p >= 1.0 && p < 2.0)) throw std::invalid_argument("l1_regress: p must be in [1,2)");
    const Index n = A.rows(), d = A.cols();

    RegressionResult res;
    if (b.lpNorm<1>() == 0.0) {
        res.x = Vector::Zero(d);
        res.converged = true;
        return res;
    }

    Vector x = A.colPivHouseholderQr().solve(b);
    double cost = residual_cost(A, x, b, p);
    res.cost_history.push_back(cost);
    Vector best_x = x;
    double best_cost = cost;

    double delta = 1e-2 * b.lpNorm<1>() / static_cast<double>(n);
    constexpr double kDeltaMin = 1e-10;
    // a level counts as stalled well before the final tolerance so the
    // annealing schedule completes within the iteration budget
    const double stall_tol = std::max(tol, 1e-5);

    Matrix WA(n, d);
    Vector Wb(n);
    int it = 0;
    for (; it < max_iters; ++it) {
        Vector r = A * x - b;
        for (Index i = 0; i < n; ++i) {
            const double m = std::max(std::abs(r(i)), delta);
            const double w = (p == 1.0) ? 1.0 / m : std::pow(m, p - 2.0);
            const double sw = std::sqrt(w);
            WA.row(i) = sw * A.row(i);
            Wb(i) = sw * b(i);
        }
        x = WA.colPivHouseholderQr().solve(Wb);
        const double next = residual_cost(A, x, b, p);
        res.cost_history.push_back(next);
        if (next < best_cost) {
            best_cost = next;
            best_x = x;
        }

        const bool at_floor = delta <= kDeltaMin;
        const double change = std::abs(cost - next);
        cost = next;
        if (!at_floor) {
            if (change <= stall_tol * std::max(cost, 1e-300))
                delta = std::max(delta * 0.5, kDeltaMin);
        } else if (change <= tol * std::max(cost, 1e-300)) {
            res.converged = true;
            ++it;
            break;
        }
    }

    // basic-solution polish: an l1 optimum interpolates d rows, so snap to
    // the vertex suggested by the smallest residuals when it improves
    if (p == 1.0 && n >= d) {
        Vector r = (A * best_x - b).cwiseAbs();
        std::vector<Index> order(static_cast<size_t>(n));
        for (Index i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
        std::partial_sort(order.begin(), order.begin() + d, order.end(),
                          [&](Index a, Index c) { return r(a) < r(c); });
        Matrix sub(d, d);
        Vector rhs(d);
        for (Index i = 0; i < d; ++i) {
            sub.row(i) = A.row(order[static_cast<size_t>(i)]);
            rhs(i) = b(order[static_cast<size_t>(i)]);
        }
        Eigen::FullPivLU<Matrix> lu(sub);
        if (lu.isInvertible()) {
            Vector cand = lu.solve(rhs);
            const double c = residual_cost(A, cand, b, 1.0);
            if (c < best_cost) {
                best_cost = c;
                best_x = cand;
                res.cost_history.push_back(c);
            }
        }
    }

    res.x = best_x;
    res.cost = best_cost;
    res.iterations = it;
    return res;
}

RegressionResult l1_regress_oracle(const Matrix& A, const Vector& b) {
    const Index n = A.rows(), d = A.cols();
    if (n > 16 || d > 4) throw std::invalid_argument("l1_regress_oracle: instance too large");
    if (A.rows() != b.size()) throw std::invalid_argument("l1_regress_oracle: shape mismatch");

    RegressionResult best;
    best.converged = true;
    best.x = A.colPivHouseholderQr().solve(b);  // fallback candidate
    best.cost = (A * best.x - b).lpNorm<1>();

    std::vector<Index> idx(static_cast<size_t>(d));
    // iterate over all size-d subsets of [n]
    std::vector<Index> comb(static_cast<size_t>(d));
    for (Index i = 0; i < d; ++i) comb[static_cast<size_t>(i)] = i;
    if (n < d) return best;

    Matrix sub(d, d);
    Vector rhs(d);
    while (true) {
        for (Index i = 0; i < d; ++i) {
            sub.row(i) = A.row(comb[static_cast<size_t>(i)]);
            rhs(i) = b(comb[static_cast<size_t>(i)]);
        }
        Eigen::FullPivLU<Matrix> lu(sub);
        if (lu.isInvertible()) {
            Vector x = lu.solve(rhs);
            const double c = (A * x - b).lpNorm<1>();
            if (c < best.cost) {
                best.cost = c;
                best.x = x;
            }
        }
        // next combination
        Index i = d - 1;
        while (i >= 0 && comb[static_cast<size_t>(i)] == n - d + i) --i;
        if (i < 0) break;
        ++comb[static_cast<size_t>(i)];
        for (Index j = i + 1; j < d; ++j)
            comb[static_cast<size_t>(j)] = comb[static_cast<size_t>(j - 1)] + 1;
    }
    return best;
}

Matrix multi_response_l2(const Matrix& U, const Matrix& A) {
    if (U.rows() != A.rows()) throw std::invalid_argument("multi_response_l2: shape mismatch");
    return pinv(U) * A;
}

Matrix multi_response_l1(const Matrix& U, const Matrix& A, const L1Options& opt) {
    if (U.rows() != A.rows()) throw std::invalid_argument("multi_response_l1: shape mismatch");
    Matrix V(U.cols(), A.cols());
    for (Index j = 0; j < A.cols(); ++j)
        V.col(j) = l1_regress(U, A.col(j), opt.p, opt.tol, opt.max_iters).x;
    return V;
}

Matrix fit_rows_l1(const Matrix& V, const Matrix& A, const L1Options& opt) {
    return multi_response_l1(V.transpose(), A.transpose(), opt).transpose();
}

}  // namespace rlra
