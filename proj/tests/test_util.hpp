#pragma once

#include <vector>

#include "ophom/rational.hpp"
#include "ophom/sparse.hpp"

// Test-only dense Gaussian elimination oracle, independent of the library's
// fraction-free sparse path.
inline size_t dense_rank_oracle(const ophom::SparseMatrix& m) {
    using ophom::Rational;
    std::vector<std::vector<Rational>> a(m.rows(), std::vector<Rational>(m.cols(), Rational(0)));
    for (const auto& e : m.entries()) a[e.row][e.col] = e.value;
    size_t rank = 0;
    size_t row = 0;
    for (size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        size_t piv = row;
        while (piv < m.rows() && a[piv][col].is_zero()) ++piv;
        if (piv == m.rows()) continue;
        std::swap(a[piv], a[row]);
        for (size_t r = 0; r < m.rows(); ++r) {
            if (r == row || a[r][col].is_zero()) continue;
            Rational f = a[r][col] / a[row][col];
            for (size_t c = col; c < m.cols(); ++c) a[r][c] -= f * a[row][c];
        }
        ++row;
        ++rank;
    }
    return rank;
}
