#pragma once

#include <cstdint>
#include <vector>

#include "ladderflow/sparse.hpp"

namespace ladderflow {

struct EigenPair {
    double value = 0.0;
    std::vector<double> vector; // unit norm
};

struct LanczosOptions {
    double tol = 1e-10;          // on the true residual ||H v - lambda v||
    int max_iter = 20000;        // matrix-vector products per eigenpair
    std::uint64_t seed = 20070101;
    Index krylov_dim = 200;      // explicit restart beyond this size
};

/// Lowest `k` eigenpairs of a symmetric operator, ascending.
///
/// Eigenpairs are found one at a time: each run is a Lanczos recurrence with
/// full reorthogonalization against its own Krylov vectors and against all
/// previously accepted eigenvectors, so a degenerate eigenvalue is returned
/// with its full multiplicity. The start vector is the normalized all-ones
/// vector plus a perturbation drawn from `seed`, so results are
/// reproducible. Throws ConvergenceError (carrying the best residual seen)
/// when an eigenpair does not reach `tol` within `max_iter` products.
std::vector<EigenPair> lanczos_lowest(const SparseOperator& op, Index k,
                                      const LanczosOptions& options = {});

inline constexpr Index dense_eig_max_dim = 5000;

/// Full spectrum by dense diagonalization; reference solver for tests and
/// small sectors. Throws DimensionGuardError above dense_eig_max_dim.
std::vector<EigenPair> dense_eig(const SparseOperator& op);

/// ||H v - lambda v||_2.
double residual(const SparseOperator& op, const EigenPair& pair);

/// Puts eigenpairs in the canonical order used by both solvers: ascending
/// value; inside a cluster with |lambda_a - lambda_b| < degeneracy_tol, by
/// the index of the largest-magnitude component. Each vector's
/// largest-magnitude component is made positive.
void canonicalize(std::vector<EigenPair>& pairs, double degeneracy_tol = 1e-10);

} // namespace ladderflow
