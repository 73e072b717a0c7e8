#include "ophom/sparse.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>

#include "json.hpp"
#include "ophom/errors.hpp"

namespace ophom {

namespace {

using Row = std::vector<std::pair<size_t, Rational>>;  // sorted by column

// Rescale a row so that its entries are coprime integers.  This is the
// normalization that keeps fraction-free elimination from blowing up.
void normalize_row(Row& row) {
    if (row.empty()) return;
    mpz_t num_gcd, den_lcm;
    mpz_init_set_ui(num_gcd, 0);
    mpz_init_set_ui(den_lcm, 1);
    for (const auto& [c, v] : row) {
        mpz_gcd(num_gcd, num_gcd, mpq_numref(v.raw()));
        mpz_lcm(den_lcm, den_lcm, mpq_denref(v.raw()));
    }
    Rational scale;
    mpq_set_num(scale.raw(), den_lcm);
    mpq_set_den(scale.raw(), num_gcd);
    mpq_canonicalize(scale.raw());
    for (auto& [c, v] : row) v *= scale;
    mpz_clear(num_gcd);
    mpz_clear(den_lcm);
}

// row_j <- piv_val * row_j - val_j * pivot_row   (eliminates column `col`)
Row eliminate(const Row& rj, const Rational& val_j, const Row& rp, const Rational& piv_val) {
    Row out;
    out.reserve(rj.size() + rp.size());
    size_t a = 0, b = 0;
    while (a < rj.size() || b < rp.size()) {
        if (b == rp.size() || (a < rj.size() && rj[a].first < rp[b].first)) {
            out.emplace_back(rj[a].first, piv_val * rj[a].second);
            ++a;
        } else if (a == rj.size() || rp[b].first < rj[a].first) {
            out.emplace_back(rp[b].first, -(val_j * rp[b].second));
            ++b;
        } else {
            Rational v = piv_val * rj[a].second - val_j * rp[b].second;
            if (!v.is_zero()) out.emplace_back(rj[a].first, std::move(v));
            ++a;
            ++b;
        }
    }
    normalize_row(out);
    return out;
}

struct Echelon {
    std::vector<Row> pivot_rows;
    std::vector<size_t> pivot_cols;  // parallel to pivot_rows
};

// Sparse fraction-free row elimination.  Returns the pivot rows in the order
// they were selected; rank = pivot count.
Echelon eliminate_all(std::vector<Row> rows, size_t cols) {
    Echelon ech;
    std::vector<size_t> col_count(cols, 0);
    for (;;) {
        // drop empty rows
        rows.erase(std::remove_if(rows.begin(), rows.end(), [](const Row& r) { return r.empty(); }),
                   rows.end());
        if (rows.empty()) break;
        std::fill(col_count.begin(), col_count.end(), 0);
        for (const auto& r : rows)
            for (const auto& [c, v] : r) ++col_count[c];
        // Markowitz pivot: minimize (nnz(row)-1)*(nnz(col)-1), ties by entry size
        size_t best_row = 0, best_col = 0;
        size_t best_cost = SIZE_MAX;
        size_t best_bits = SIZE_MAX;
        for (size_t i = 0; i < rows.size(); ++i) {
            for (const auto& [c, v] : rows[i]) {
                size_t cost = (rows[i].size() - 1) * (col_count[c] - 1);
                size_t bits = v.bit_size();
                if (cost < best_cost || (cost == best_cost && bits < best_bits)) {
                    best_cost = cost;
                    best_bits = bits;
                    best_row = i;
                    best_col = c;
                }
            }
        }
        Row pivot = std::move(rows[best_row]);
        rows.erase(rows.begin() + static_cast<long>(best_row));
        Rational piv_val;
        for (const auto& [c, v] : pivot)
            if (c == best_col) piv_val = v;
        for (auto& r : rows) {
            Rational vj;
            bool hit = false;
            for (const auto& [c, v] : r)
                if (c == best_col) { vj = v; hit = true; break; }
            if (hit) r = eliminate(r, vj, pivot, piv_val);
        }
        ech.pivot_rows.push_back(std::move(pivot));
        ech.pivot_cols.push_back(best_col);
    }
    return ech;
}

std::vector<Row> to_rows(const SparseMatrix& m) {
    std::vector<Row> rows(m.rows());
    for (const auto& e : m.entries()) rows[e.row].emplace_back(e.col, e.value);
    for (auto& r : rows) normalize_row(r);
    return rows;
}

}  // namespace

SparseMatrix SparseMatrix::identity(size_t n) {
    SparseMatrix m(n, n);
    for (size_t i = 0; i < n; ++i) m.set(i, i, Rational(1));
    return m;
}

SparseMatrix SparseMatrix::from_columns(
    size_t rows, size_t cols,
    const std::function<std::vector<std::pair<size_t, Rational>>(size_t)>& image) {
    SparseMatrix m(rows, cols);
    std::map<std::pair<size_t, size_t>, Rational> acc;
    for (size_t j = 0; j < cols; ++j)
        for (auto& [i, v] : image(j)) {
            if (i >= rows) throw Error(ErrorCode::DimensionMismatch, "from_columns: row out of range");
            if (!v.is_zero()) acc[{i, j}] += v;
        }
    for (auto& [rc, v] : acc)
        if (!v.is_zero()) m.entries_.push_back({rc.first, rc.second, v});
    return m;
}

void SparseMatrix::set(size_t r, size_t c, Rational v) {
    if (r >= rows_ || c >= cols_) throw Error(ErrorCode::DimensionMismatch, "set: index out of range");
    auto it = std::lower_bound(entries_.begin(), entries_.end(), std::make_pair(r, c),
                               [](const Entry& e, const std::pair<size_t, size_t>& rc) {
                                   return std::make_pair(e.row, e.col) < rc;
                               });
    if (it != entries_.end() && it->row == r && it->col == c) {
        if (v.is_zero()) entries_.erase(it);
        else it->value = std::move(v);
    } else if (!v.is_zero()) {
        entries_.insert(it, Entry{r, c, std::move(v)});
    }
}

Rational SparseMatrix::at(size_t r, size_t c) const {
    for (const auto& e : entries_)
        if (e.row == r && e.col == c) return e.value;
    return Rational(0);
}

std::vector<Rational> SparseMatrix::apply(const std::vector<Rational>& v) const {
    if (v.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "apply: bad vector length");
    std::vector<Rational> out(rows_, Rational(0));
    for (const auto& e : entries_) out[e.row] += e.value * v[e.col];
    return out;
}

SparseMatrix SparseMatrix::multiply(const SparseMatrix& other) const {
    if (cols_ != other.rows_)
        throw Error(ErrorCode::DimensionMismatch, "multiply: inner dimensions disagree");
    std::map<std::pair<size_t, size_t>, Rational> acc;
    // index other by row
    std::vector<std::vector<const Entry*>> by_row(other.rows_);
    for (const auto& e : other.entries_) by_row[e.row].push_back(&e);
    for (const auto& e : entries_)
        for (const Entry* f : by_row[e.col]) acc[{e.row, f->col}] += e.value * f->value;
    SparseMatrix m(rows_, other.cols_);
    for (auto& [rc, v] : acc)
        if (!v.is_zero()) m.entries_.push_back({rc.first, rc.second, v});
    return m;
}

size_t SparseMatrix::rank() const { return eliminate_all(to_rows(*this), cols_).pivot_rows.size(); }

std::vector<std::vector<Rational>> SparseMatrix::kernel_basis() const {
    Echelon ech = eliminate_all(to_rows(*this), cols_);
    std::vector<bool> is_pivot(cols_, false);
    for (size_t c : ech.pivot_cols) is_pivot[c] = true;

    std::vector<std::vector<Rational>> basis;
    for (size_t free_col = 0; free_col < cols_; ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<Rational> v(cols_, Rational(0));
        v[free_col] = Rational(1);
        // A pivot row is clean in all pivot columns selected before it, so
        // solving in reverse selection order is a triangular solve.
        for (size_t k = ech.pivot_rows.size(); k-- > 0;) {
            const Row& row = ech.pivot_rows[k];
            size_t pc = ech.pivot_cols[k];
            Rational dot(0), piv(0);
            for (const auto& [c, val] : row) {
                if (c == pc) piv = val;
                else dot += val * v[c];
            }
            v[pc] = -dot / piv;
        }
        assert([&] {
            for (auto& x : apply(v))
                if (!x.is_zero()) return false;
            return true;
        }());
        basis.push_back(std::move(v));
    }
    return basis;
}

size_t homology_dim(const SparseMatrix& d_in, const SparseMatrix& d_out) {
    if (d_out.cols() != d_in.rows())
        throw Error(ErrorCode::DimensionMismatch, "homology_dim: d_out.cols != d_in.rows");
    if (!d_out.multiply(d_in).is_zero())
        throw Error(ErrorCode::CompositionNotZero, "homology_dim: d_out . d_in != 0");
    size_t rk_out = d_out.rank();
    size_t rk_in = d_in.rank();
    size_t ker = d_out.cols() - rk_out;
    assert(ker >= rk_in);
    return ker - rk_in;
}

std::optional<std::vector<Rational>> solve_sparse(
    size_t cols, std::vector<std::vector<std::pair<size_t, Rational>>> in_rows,
    std::vector<Rational> rhs) {
    return solve_sparse_pivot(cols, std::move(in_rows), std::move(rhs), 0);
}

std::optional<std::vector<Rational>> solve_sparse_pivot(
    size_t cols, std::vector<std::vector<std::pair<size_t, Rational>>> in_rows,
    std::vector<Rational> rhs, int pivot_mode) {
    // The right-hand side rides along as a virtual column `cols` that is
    // never eligible as a pivot.
    std::vector<Row> rows(in_rows.size());
    for (size_t i = 0; i < in_rows.size(); ++i) {
        rows[i] = std::move(in_rows[i]);
        std::sort(rows[i].begin(), rows[i].end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        if (!rhs[i].is_zero()) rows[i].emplace_back(cols, rhs[i]);
        normalize_row(rows[i]);
    }
    std::vector<size_t> col_count(cols + 1, 0);
    Echelon ech;
    for (;;) {
        rows.erase(std::remove_if(rows.begin(), rows.end(), [](const Row& r) { return r.empty(); }),
                   rows.end());
        // inconsistency: a row supported on the virtual column alone
        for (const auto& r : rows)
            if (r.size() == 1 && r[0].first == cols) return std::nullopt;
        if (rows.empty()) break;
        std::fill(col_count.begin(), col_count.end(), 0);
        for (const auto& r : rows)
            for (const auto& [c, v] : r) ++col_count[c];
        size_t best_row = SIZE_MAX, best_col = 0;
        size_t best_cost = SIZE_MAX, best_bits = SIZE_MAX;
        for (size_t i = 0; i < rows.size(); ++i)
            for (const auto& [c, v] : rows[i]) {
                if (c == cols) continue;
                size_t cost;
                if (pivot_mode == 1) cost = c;  // smallest column first
                else if (pivot_mode == 2) cost = cols - c;  // largest column first
                else cost = (rows[i].size() - 1) * (col_count[c] - 1);
                size_t bits = v.bit_size();
                if (cost < best_cost || (cost == best_cost && bits < best_bits)) {
                    best_cost = cost;
                    best_bits = bits;
                    best_row = i;
                    best_col = c;
                }
            }
        if (best_row == SIZE_MAX) break;  // only virtual-column rows remain (all zero)
        Row pivot = std::move(rows[best_row]);
        rows.erase(rows.begin() + static_cast<long>(best_row));
        Rational piv_val;
        for (const auto& [c, v] : pivot)
            if (c == best_col) piv_val = v;
        for (auto& r : rows) {
            Rational vj;
            bool hit = false;
            for (const auto& [c, v] : r)
                if (c == best_col) { vj = v; hit = true; break; }
            if (hit) r = eliminate(r, vj, pivot, piv_val);
        }
        ech.pivot_rows.push_back(std::move(pivot));
        ech.pivot_cols.push_back(best_col);
    }
    std::vector<Rational> x(cols, Rational(0));
    for (size_t k = ech.pivot_rows.size(); k-- > 0;) {
        const Row& row = ech.pivot_rows[k];
        size_t pc = ech.pivot_cols[k];
        Rational dot(0), piv(0);
        for (const auto& [c, val] : row) {
            if (c == pc) piv = val;
            else if (c == cols) dot -= val;  // move the rhs over
            else dot += val * x[c];
        }
        x[pc] = -dot / piv;
    }
    return x;
}

std::string SparseMatrix::to_json() const {
    nlohmann::ordered_json j;
    j["rows"] = rows_;
    j["cols"] = cols_;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& e : entries_)
        arr.push_back(nlohmann::ordered_json::array({e.row, e.col, e.value.str()}));
    j["entries"] = arr;
    return j.dump();
}

SparseMatrix SparseMatrix::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    SparseMatrix m(j.at("rows").get<size_t>(), j.at("cols").get<size_t>());
    for (const auto& e : j.at("entries"))
        m.set(e.at(0).get<size_t>(), e.at(1).get<size_t>(), Rational(e.at(2).get<std::string>()));
    return m;
}

}  // namespace ophom
