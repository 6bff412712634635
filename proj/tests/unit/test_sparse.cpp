#include <doctest.h>

#include <random>

#include "ladderflow/errors.hpp"
#include "ladderflow/basis.hpp"
#include "ladderflow/hamiltonian.hpp"
#include "ladderflow/sparse.hpp"

using namespace ladderflow;

TEST_CASE("identity operator leaves vectors unchanged") {
    const auto id = SparseOperator::identity(5);
    const std::vector<double> v{1.0, -2.0, 3.5, 0.0, 7.0};
    CHECK(apply(id, v) == v);
    CHECK(id.nnz() == 5);
}

TEST_CASE("duplicate entries are summed and zeros dropped") {
    const SparseOperator op(2, {{{0, 1.0}, {1, 0.5}, {0, 1.0}}, {{1, 0.0}, {0, 0.5}}});
    CHECK(op.at(0, 0) == 2.0);
    CHECK(op.at(0, 1) == 0.5);
    CHECK(op.at(1, 1) == 0.0);
    CHECK(op.nnz() == 3);
}

TEST_CASE("asymmetric input is rejected") {
    CHECK_THROWS_AS(SparseOperator(2, {{{1, 1.0}}, {{0, 2.0}}}), InvalidArgumentError);
}

TEST_CASE("apply on a unit vector returns the column") {
    const auto basis = enumerate_basis(Scheme::SU2, 3, 0);
    const auto h1 = build_h1(basis, 0.7, 0.3);
    const auto dense = h1.to_dense();
    const Index n = h1.dim();
    for (Index k : {Index{0}, Index{7}, n - 1}) {
        std::vector<double> e(n, 0.0);
        e[k] = 1.0;
        const auto col = apply(h1, e);
        for (Index r = 0; r < n; ++r) CHECK(col[r] == dense[r * n + k]);
    }
}

TEST_CASE("apply is symmetric on random vectors at L=4") {
    const auto basis = enumerate_basis(Scheme::SU2, 4, 0);
    const auto h1 = build_h1(basis, 1.3, 0.4);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> dist;
    std::vector<double> u(h1.dim()), v(h1.dim());
    for (auto& x : u) x = dist(rng);
    for (auto& x : v) x = dist(rng);
    CHECK(std::abs(dot(u, apply(h1, v)) - dot(apply(h1, u), v)) < 1e-12);
}

TEST_CASE("dimension mismatch in apply throws") {
    const auto id = SparseOperator::identity(3);
    const std::vector<double> v(4, 1.0);
    CHECK_THROWS_AS(apply(id, v), DimensionMismatchError);
}

TEST_CASE("restricted keeps the principal submatrix") {
    const std::vector<double> m{1, 2, 3, 2, 4, 5, 3, 5, 6};
    const auto op = SparseOperator::from_dense(m, 3);
    const std::vector<Index> keep{0, 2};
    const auto sub = op.restricted(keep);
    CHECK(sub.dim() == 2);
    CHECK(sub.at(0, 0) == 1.0);
    CHECK(sub.at(0, 1) == 3.0);
    CHECK(sub.at(1, 1) == 6.0);
    CHECK(op.scaled(2.0).at(1, 2) == 10.0);
}

TEST_CASE("diagonal matches dense diagonal at L=3") {
    const auto basis = enumerate_basis(Scheme::SU2, 3, 0);
    const auto h1 = build_h1(basis, 0.9, 1.1);
    const auto dense = h1.to_dense();
    const auto d = diagonal(h1);
    for (Index i = 0; i < h1.dim(); ++i) CHECK(d[i] == dense[i * h1.dim() + i]);
}
