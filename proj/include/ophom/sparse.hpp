#pragma once

#include <cstddef>
#include <optional>
#include <functional>
#include <string>
#include <vector>

#include "ophom/rational.hpp"

namespace ophom {

// Sparse matrix over the rationals, acting on column vectors:
// M : Q^cols -> Q^rows.  Entries are kept sorted by (row, col) with no
// duplicates and no explicit zeros.
class SparseMatrix {
public:
    struct Entry {
        size_t row, col;
        Rational value;
    };

    SparseMatrix() = default;
    SparseMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols) {}

    static SparseMatrix identity(size_t n);

    // Assembles the matrix of a linear map from its values on basis vectors:
    // column j holds image(j) expressed in output coordinates.
    static SparseMatrix from_columns(
        size_t rows, size_t cols,
        const std::function<std::vector<std::pair<size_t, Rational>>(size_t)>& image);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    size_t nnz() const { return entries_.size(); }
    const std::vector<Entry>& entries() const { return entries_; }

    void set(size_t r, size_t c, Rational v);
    Rational at(size_t r, size_t c) const;

    std::vector<Rational> apply(const std::vector<Rational>& v) const;
    SparseMatrix multiply(const SparseMatrix& other) const;  // this * other
    bool is_zero() const { return entries_.empty(); }

    friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) = default;

    // Exact rank over Q by fraction-free elimination: rows are rescaled to
    // coprime integer entries after every update and pivots are chosen by a
    // Markowitz fill estimate.
    size_t rank() const;

    // Basis of ker(M); every returned v satisfies M v = 0 exactly (asserted).
    std::vector<std::vector<Rational>> kernel_basis() const;

    std::string to_json() const;
    static SparseMatrix from_json(const std::string& text);

private:
    size_t rows_ = 0, cols_ = 0;
    std::vector<Entry> entries_;
};

// dim ker(d_out) - rank(d_in) for a composable pair d_out . d_in = 0.
// Throws DimensionMismatch / CompositionNotZero.
size_t homology_dim(const SparseMatrix& d_in, const SparseMatrix& d_out);

// Solves the sparse linear system (rows . x = rhs) over Q with the same
// fraction-free elimination; returns the canonical solution with all free
// coordinates zero, or nullopt when the system is inconsistent.
std::optional<std::vector<Rational>> solve_sparse(
    size_t cols, std::vector<std::vector<std::pair<size_t, Rational>>> rows,
    std::vector<Rational> rhs);

// Same with an explicit pivot strategy (0 = Markowitz, 1 = first column,
// 2 = last column); different strategies select different canonical points
// of an underdetermined system.
std::optional<std::vector<Rational>> solve_sparse_pivot(
    size_t cols, std::vector<std::vector<std::pair<size_t, Rational>>> rows,
    std::vector<Rational> rhs, int pivot_mode);

}  // namespace ophom
