#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ladderflow {

using Index = std::size_t;

struct Entry {
    Index col;
    double value;
};

/// General real sparse matrix in compressed-row form.
///
/// Rows are kept sorted by column and duplicate (row, col) contributions are
/// summed on construction, so assembly code may emit the same element several
/// times.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(Index rows, Index cols, std::vector<std::vector<Entry>> row_entries);

    Index rows() const noexcept { return rows_; }
    Index cols() const noexcept { return cols_; }
    std::size_t nnz() const noexcept { return values_.size(); }

    std::span<const Index> row_cols(Index r) const;
    std::span<const double> row_values(Index r) const;

    /// Element lookup by binary search; zero when not stored.
    double at(Index r, Index c) const;

    void apply(std::span<const double> in, std::span<double> out) const;
    void apply_transpose(std::span<const double> in, std::span<double> out) const;

protected:
    Index rows_ = 0;
    Index cols_ = 0;
    std::vector<std::size_t> offsets_{0};
    std::vector<Index> cols_idx_;
    std::vector<double> values_;
};

/// Real symmetric operator with full (both triangles) storage.
///
/// Construction checks that (i, j) and (j, i) agree to within 1e-12 relative
/// to the largest element and stores the average of the two, so every
/// instance is exactly symmetric.
class SparseOperator : public SparseMatrix {
public:
    SparseOperator() = default;
    SparseOperator(Index dim, std::vector<std::vector<Entry>> row_entries);

    static SparseOperator identity(Index dim);
    static SparseOperator from_dense(std::span<const double> row_major, Index dim);

    Index dim() const noexcept { return rows_; }

    std::vector<double> apply(std::span<const double> v) const;
    using SparseMatrix::apply;

    std::vector<double> diagonal() const;

    SparseOperator scaled(double factor) const;

    /// Principal submatrix on the listed original indices, in the given
    /// order. Position k of the result corresponds to `keep[k]`.
    SparseOperator restricted(std::span<const Index> keep) const;

    std::vector<double> to_dense() const;
};

std::vector<double> apply(const SparseOperator& op, std::span<const double> v);
std::vector<double> diagonal(const SparseOperator& op);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

} // namespace ladderflow
