#include "ladderflow/eigensolver.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "ladderflow/errors.hpp"

namespace ladderflow {

namespace {

Index argmax_abs(const std::vector<double>& v) {
    Index best = 0;
    for (Index i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[best])) best = i;
    return best;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void scale(std::span<double> x, double a) {
    for (double& v : x) v *= a;
}

// Two passes of classical Gram-Schmidt against `basis`.
void orthogonalize(std::span<double> w, const std::vector<std::vector<double>>& basis) {
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : basis) axpy(-dot(q, w), q, w);
}

struct RitzPair {
    double value;
    Eigen::VectorXd coefficients;
};

RitzPair lowest_ritz(const std::vector<double>& alpha, const std::vector<double>& beta, Index m) {
    Eigen::VectorXd diag(static_cast<Eigen::Index>(m));
    Eigen::VectorXd sub(static_cast<Eigen::Index>(std::max<Index>(m, 1) - 1));
    for (Index i = 0; i < m; ++i) diag[static_cast<Eigen::Index>(i)] = alpha[i];
    for (Index i = 0; i + 1 < m; ++i) sub[static_cast<Eigen::Index>(i)] = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    return {solver.eigenvalues()[0], solver.eigenvectors().col(0)};
}

class Deflated {
public:
    Deflated(const SparseOperator& op, const LanczosOptions& options)
        : op_(op), options_(options), rng_(options.seed) {}

    EigenPair next() {
        const Index dim = op_.dim();
        const Index available = dim - locked_.size();
        std::vector<double> start = random_start();
        double best = std::numeric_limits<double>::infinity();
        int products = 0;

        while (true) {
            std::vector<std::vector<double>> q;
            std::vector<double> alpha, beta;
            q.push_back(start);
            std::vector<double> w(dim);
            const Index limit = std::min(available, std::max<Index>(options_.krylov_dim, 2));
            std::vector<double> ritz_vector;

            for (Index j = 0;; ++j) {
                op_.SparseMatrix::apply(q[j], w);
                ++products;
                alpha.push_back(dot(q[j], w));
                axpy(-alpha[j], q[j], w);
                if (j > 0) axpy(-beta[j - 1], q[j - 1], w);
                orthogonalize(w, locked_);
                orthogonalize(w, q);
                const double b = norm2(w);
                beta.push_back(b);

                const Index m = j + 1;
                const bool exhausted = m >= limit || b <= 1e-13 * (std::abs(alpha[j]) + 1.0);
                const bool out_of_budget = products >= options_.max_iter;
                if (exhausted || out_of_budget || m % check_interval(m) == 0) {
                    const RitzPair ritz = lowest_ritz(alpha, beta, m);
                    const double estimate = b * std::abs(ritz.coefficients[static_cast<Eigen::Index>(m - 1)]);
                    if (estimate < 0.5 * options_.tol || exhausted || out_of_budget) {
                        ritz_vector.assign(dim, 0.0);
                        for (Index i = 0; i < m; ++i)
                            axpy(ritz.coefficients[static_cast<Eigen::Index>(i)], q[i], ritz_vector);
                        orthogonalize(ritz_vector, locked_);
                        scale(ritz_vector, 1.0 / norm2(ritz_vector));
                        EigenPair pair{0.0, ritz_vector};
                        pair.value = dot(ritz_vector, op_.apply(ritz_vector));
                        const double r = residual(op_, pair);
                        best = std::min(best, r);
                        if (r < options_.tol) {
                            locked_.push_back(pair.vector);
                            return pair;
                        }
                        if (exhausted || out_of_budget) break;
                    }
                }
                q.emplace_back(w);
                scale(q.back(), 1.0 / b);
            }

            if (products >= options_.max_iter)
                throw ConvergenceError("Lanczos did not converge for eigenpair " +
                                           std::to_string(locked_.size() + 1) + " after " +
                                           std::to_string(products) + " products (best residual " +
                                           std::to_string(best) + ")",
                                       best);
            // Explicit restart from the current best Ritz vector.
            start = std::move(ritz_vector);
        }
    }

private:
    static Index check_interval(Index m) { return m < 40 ? 4 : 10; }

    std::vector<double> random_start() {
        const Index dim = op_.dim();
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        const double base = 1.0 / std::sqrt(static_cast<double>(dim));
        for (int attempt = 0; attempt < 8; ++attempt) {
            std::vector<double> v(dim);
            for (double& x : v) x = base * (1.0 + 0.5 * dist(rng_));
            orthogonalize(v, locked_);
            const double n = norm2(v);
            if (n > 1e-8) {
                scale(v, 1.0 / n);
                return v;
            }
        }
        throw ConvergenceError("could not build a start vector orthogonal to converged eigenvectors",
                               std::numeric_limits<double>::infinity());
    }

    const SparseOperator& op_;
    LanczosOptions options_;
    std::mt19937_64 rng_;
    std::vector<std::vector<double>> locked_;
};

} // namespace

std::vector<EigenPair> lanczos_lowest(const SparseOperator& op, Index k, const LanczosOptions& options) {
    if (k < 1 || k > op.dim())
        throw InvalidArgumentError("lanczos_lowest: k=" + std::to_string(k) + " for dimension " +
                                   std::to_string(op.dim()));
    if (!(options.tol > 0.0)) throw InvalidArgumentError("lanczos_lowest: tol must be positive");

    Deflated solver(op, options);
    std::vector<EigenPair> pairs;
    pairs.reserve(k);
    for (Index i = 0; i < k; ++i) pairs.push_back(solver.next());
    canonicalize(pairs);
    return pairs;
}

std::vector<EigenPair> dense_eig(const SparseOperator& op) {
    const Index n = op.dim();
    if (n > dense_eig_max_dim)
        throw DimensionGuardError("dense_eig refuses dimension " + std::to_string(n) + " > " +
                                  std::to_string(dense_eig_max_dim));
    const std::vector<double> dense = op.to_dense();
    const auto en = static_cast<Eigen::Index>(n);
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        matrix(dense.data(), en, en);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix);

    std::vector<EigenPair> pairs(n);
    for (Index i = 0; i < n; ++i) {
        const auto ei = static_cast<Eigen::Index>(i);
        pairs[i].value = solver.eigenvalues()[ei];
        pairs[i].vector.assign(solver.eigenvectors().col(ei).data(),
                               solver.eigenvectors().col(ei).data() + n);
    }
    canonicalize(pairs);
    return pairs;
}

double residual(const SparseOperator& op, const EigenPair& pair) {
    std::vector<double> r = op.apply(pair.vector);
    axpy(-pair.value, pair.vector, r);
    return norm2(r);
}

void canonicalize(std::vector<EigenPair>& pairs, double degeneracy_tol) {
    for (auto& p : pairs) {
        if (p.vector.empty()) continue;
        if (p.vector[argmax_abs(p.vector)] < 0.0) scale(p.vector, -1.0);
    }
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const EigenPair& a, const EigenPair& b) { return a.value < b.value; });
    for (std::size_t start = 0; start < pairs.size();) {
        std::size_t end = start + 1;
        while (end < pairs.size() && pairs[end].value - pairs[end - 1].value < degeneracy_tol) ++end;
        std::stable_sort(pairs.begin() + static_cast<std::ptrdiff_t>(start),
                         pairs.begin() + static_cast<std::ptrdiff_t>(end),
                         [](const EigenPair& a, const EigenPair& b) {
                             return argmax_abs(a.vector) < argmax_abs(b.vector);
                         });
        start = end;
    }
}

} // namespace ladderflow
