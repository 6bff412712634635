#include "ladderflow/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ladderflow/errors.hpp"

namespace ladderflow {

SparseMatrix::SparseMatrix(Index rows, Index cols, std::vector<std::vector<Entry>> row_entries)
    : rows_(rows), cols_(cols) {
    if (row_entries.size() != rows)
        throw DimensionMismatchError("row list has " + std::to_string(row_entries.size()) +
                                     " rows, expected " + std::to_string(rows));
    offsets_.reserve(rows + 1);
    for (auto& row : row_entries) {
        std::sort(row.begin(), row.end(),
                  [](const Entry& a, const Entry& b) { return a.col < b.col; });
        for (std::size_t k = 0; k < row.size();) {
            const Index c = row[k].col;
            if (c >= cols)
                throw DimensionMismatchError("column index " + std::to_string(c) +
                                             " out of range");
            double sum = 0.0;
            for (; k < row.size() && row[k].col == c; ++k) sum += row[k].value;
            if (sum != 0.0) {
                cols_idx_.push_back(c);
                values_.push_back(sum);
            }
        }
        offsets_.push_back(values_.size());
    }
}

std::span<const Index> SparseMatrix::row_cols(Index r) const {
    return {cols_idx_.data() + offsets_[r], offsets_[r + 1] - offsets_[r]};
}

std::span<const double> SparseMatrix::row_values(Index r) const {
    return {values_.data() + offsets_[r], offsets_[r + 1] - offsets_[r]};
}

double SparseMatrix::at(Index r, Index c) const {
    const auto cs = row_cols(r);
    const auto it = std::lower_bound(cs.begin(), cs.end(), c);
    if (it == cs.end() || *it != c) return 0.0;
    return row_values(r)[static_cast<std::size_t>(it - cs.begin())];
}

void SparseMatrix::apply(std::span<const double> in, std::span<double> out) const {
    if (in.size() != cols_ || out.size() != rows_)
        throw DimensionMismatchError("apply: vector of size " + std::to_string(in.size()) +
                                     " against " + std::to_string(rows_) + "x" +
                                     std::to_string(cols_) + " matrix");
    for (Index r = 0; r < rows_; ++r) {
        double acc = 0.0;
        for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k)
            acc += values_[k] * in[cols_idx_[k]];
        out[r] = acc;
    }
}

void SparseMatrix::apply_transpose(std::span<const double> in, std::span<double> out) const {
    if (in.size() != rows_ || out.size() != cols_)
        throw DimensionMismatchError("apply_transpose: size mismatch");
    std::fill(out.begin(), out.end(), 0.0);
    for (Index r = 0; r < rows_; ++r)
        for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k)
            out[cols_idx_[k]] += values_[k] * in[r];
}

SparseOperator::SparseOperator(Index dim, std::vector<std::vector<Entry>> row_entries)
    : SparseMatrix(dim, dim, std::move(row_entries)) {
    double scale = 0.0;
    for (double v : values_) scale = std::max(scale, std::abs(v));
    const double tol = 1e-12 * std::max(scale, 1.0);
    std::vector<double> sym(values_.size());
    for (Index r = 0; r < dim; ++r) {
        for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) {
            const Index c = cols_idx_[k];
            const double mirror = at(c, r);
            if (std::abs(mirror - values_[k]) > tol)
                throw InvalidArgumentError("operator is not symmetric at (" + std::to_string(r) +
                                           ", " + std::to_string(c) + ")");
            sym[k] = 0.5 * (values_[k] + mirror);
        }
    }
    values_ = std::move(sym);
}

SparseOperator SparseOperator::identity(Index dim) {
    std::vector<std::vector<Entry>> rows(dim);
    for (Index i = 0; i < dim; ++i) rows[i].push_back({i, 1.0});
    return {dim, std::move(rows)};
}

SparseOperator SparseOperator::from_dense(std::span<const double> row_major, Index dim) {
    if (row_major.size() != dim * dim)
        throw DimensionMismatchError("dense input is not " + std::to_string(dim) + "x" +
                                     std::to_string(dim));
    std::vector<std::vector<Entry>> rows(dim);
    for (Index i = 0; i < dim; ++i)
        for (Index j = 0; j < dim; ++j)
            if (row_major[i * dim + j] != 0.0) rows[i].push_back({j, row_major[i * dim + j]});
    return {dim, std::move(rows)};
}

std::vector<double> SparseOperator::apply(std::span<const double> v) const {
    std::vector<double> out(rows_);
    SparseMatrix::apply(v, out);
    return out;
}

std::vector<double> SparseOperator::diagonal() const {
    std::vector<double> d(rows_, 0.0);
    for (Index r = 0; r < rows_; ++r) d[r] = at(r, r);
    return d;
}

SparseOperator SparseOperator::scaled(double factor) const {
    SparseOperator out = *this;
    for (double& v : out.values_) v *= factor;
    return out;
}

SparseOperator SparseOperator::restricted(std::span<const Index> keep) const {
    constexpr Index absent = static_cast<Index>(-1);
    std::vector<Index> position(rows_, absent);
    for (Index k = 0; k < keep.size(); ++k) {
        if (keep[k] >= rows_) throw DimensionMismatchError("restricted: index out of range");
        position[keep[k]] = k;
    }
    std::vector<std::vector<Entry>> rows(keep.size());
    for (Index k = 0; k < keep.size(); ++k) {
        const auto cs = row_cols(keep[k]);
        const auto vs = row_values(keep[k]);
        for (std::size_t e = 0; e < cs.size(); ++e)
            if (position[cs[e]] != absent) rows[k].push_back({position[cs[e]], vs[e]});
    }
    return {keep.size(), std::move(rows)};
}

std::vector<double> SparseOperator::to_dense() const {
    std::vector<double> dense(rows_ * rows_, 0.0);
    for (Index r = 0; r < rows_; ++r)
        for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k)
            dense[r * rows_ + cols_idx_[k]] = values_[k];
    return dense;
}

std::vector<double> apply(const SparseOperator& op, std::span<const double> v) {
    return op.apply(v);
}

std::vector<double> diagonal(const SparseOperator& op) { return op.diagonal(); }

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionMismatchError("dot: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

} // namespace ladderflow
