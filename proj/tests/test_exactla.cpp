#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ophom/errors.hpp"
#include "ophom/ger.hpp"
#include "ophom/rng.hpp"
#include "ophom/sparse.hpp"
#include "test_util.hpp"

using namespace ophom;

TEST_CASE("rational arithmetic is exact and canonical") {
    Rational a(2, 4);
    CHECK(a.str() == "1/2");
    CHECK((a + a).str() == "1");
    CHECK((Rational(1, 3) + Rational(1, 6)).str() == "1/2");
    CHECK((Rational(-3, 9)).str() == "-1/3");
    CHECK(Rational("7/21").str() == "1/3");
    CHECK((Rational(2, 3) * Rational(3, 2)).str() == "1");
    CHECK_THROWS(Rational(1, 1) / Rational(0));
    // property: (a + b) - b == a on random values
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        Rational x(rng.small_nonzero(1000), rng.range(1, 999));
        Rational y(rng.small_nonzero(1000), rng.range(1, 999));
        CHECK(x + y - y == x);
        CHECK((x * y) / y == x);
    }
}

TEST_CASE("rank: zero and identity") {
    CHECK(SparseMatrix(3, 3).rank() == 0);
    CHECK(SparseMatrix::identity(4).rank() == 4);
}

TEST_CASE("rank of R on Ger(2) in the basis {mu, b}") {
    // R(mu) = b, R(b) = 0
    SparseMatrix m(2, 2);
    m.set(1, 0, Rational(1));
    CHECK(m.rank() == 1);
}

TEST_CASE("rank + kernel dim = cols; kernel vectors annihilate") {
    Rng rng(17);
    for (int trial = 0; trial < 25; ++trial) {
        size_t rows = 1 + rng.below(6), cols = 1 + rng.below(6);
        SparseMatrix m(rows, cols);
        for (size_t k = 0; k < rows * cols / 2; ++k)
            m.set(rng.below(rows), rng.below(cols), Rational(rng.range(-3, 3)));
        size_t rk = m.rank();
        auto ker = m.kernel_basis();
        CHECK(rk + ker.size() == cols);
        CHECK(rk == dense_rank_oracle(m));
        for (const auto& v : ker)
            for (const auto& x : m.apply(v)) CHECK(x.is_zero());
    }
}

TEST_CASE("rank invariant under row and column permutation") {
    Rng rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        size_t n = 4 + rng.below(3);
        SparseMatrix m(n, n);
        for (size_t k = 0; k < n * n / 2; ++k)
            m.set(rng.below(n), rng.below(n), Rational(rng.range(-2, 2)));
        std::vector<size_t> rp(n), cp(n);
        for (size_t i = 0; i < n; ++i) rp[i] = cp[i] = i;
        for (size_t i = n; i > 1; --i) {
            std::swap(rp[i - 1], rp[rng.below(i)]);
            std::swap(cp[i - 1], cp[rng.below(i)]);
        }
        SparseMatrix p(n, n);
        for (const auto& e : m.entries()) p.set(rp[e.row], cp[e.col], e.value);
        CHECK(m.rank() == p.rank());
    }
}

TEST_CASE("kernel basis spec examples") {
    CHECK(SparseMatrix::identity(3).kernel_basis().empty());
    CHECK(SparseMatrix(2, 2).kernel_basis().size() == 2);
    GerOperad ger(3);
    CHECK(ger.r_matrix(3).kernel_basis().size() == 3);  // dim Grav(3)
}

TEST_CASE("homology_dim") {
    // zero differentials on dimension 5
    CHECK(homology_dim(SparseMatrix(5, 5), SparseMatrix(5, 5)) == 5);
    // two-term complex k -> k with iso differential: 0 at both ends
    SparseMatrix iso(1, 1);
    iso.set(0, 0, Rational(1));
    CHECK(homology_dim(SparseMatrix(1, 0), iso) == 0);
    CHECK(homology_dim(iso, SparseMatrix(0, 1)) == 0);
    // composition-not-zero is rejected
    SparseMatrix d(1, 1);
    d.set(0, 0, Rational(1));
    CHECK_THROWS_AS(homology_dim(d, d), Error);
    // shape mismatch
    CHECK_THROWS_AS(homology_dim(SparseMatrix(2, 1), SparseMatrix(4, 3)), Error);
}

TEST_CASE("solve_sparse particular solutions") {
    // x + y = 3, x - y = 1 -> x = 2, y = 1
    std::vector<std::vector<std::pair<size_t, Rational>>> rows = {
        {{0, Rational(1)}, {1, Rational(1)}},
        {{0, Rational(1)}, {1, Rational(-1)}},
    };
    auto sol = solve_sparse(2, rows, {Rational(3), Rational(1)});
    REQUIRE(sol.has_value());
    CHECK((*sol)[0] == Rational(2));
    CHECK((*sol)[1] == Rational(1));
    // inconsistent
    rows = {{{0, Rational(1)}}, {{0, Rational(1)}}};
    CHECK(!solve_sparse(1, rows, {Rational(1), Rational(2)}).has_value());
}

TEST_CASE("matrix JSON round trip") {
    SparseMatrix m(2, 3);
    m.set(0, 1, Rational(1, 2));
    m.set(1, 2, Rational(-3));
    SparseMatrix back = SparseMatrix::from_json(m.to_json());
    CHECK(back == m);
    CHECK(m.to_json() == back.to_json());
}
