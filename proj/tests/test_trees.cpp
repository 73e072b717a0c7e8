#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ophom/graded.hpp"
#include "ophom/operad.hpp"
#include "ophom/trees.hpp"

using namespace ophom;

TEST_CASE("tree keys and JSON round trip") {
    Tree t = parse_tree_key("b(w1(w3),w2)");
    CHECK(tree_key(t) == "b(w1(w3),w2)");
    CHECK(t.count_black() == 1);
    CHECK(t.count_edges() == 3);
    CHECK(t.degree() == -1);
    CHECK(t.stable());
    Tree back = tree_from_json(tree_to_json(t));
    CHECK(tree_key(back) == tree_key(t));
    CHECK(!parse_tree_key("b(w1)").stable());
}

TEST_CASE("enumeration: golden counts") {
    CHECK(enumerate_m_trees(1).size() == 1);
    CHECK(enumerate_m_trees(2).size() == 4);    // golden value, exhaustive generation
    CHECK(enumerate_m_trees(3).size() == 48);   // golden value
    CHECK(enumerate_m_trees(4).size() == 960);  // golden value
}

TEST_CASE("composition: units and associativity") {
    MOperad m(4);
    Tree unit = parse_tree_key("w1");
    Tree tc = parse_tree_key("b(w1,w2)");
    CHECK(m_compose(unit, 1, tc) == FormalSum<>::basis("b(w1,w2)"));
    CHECK(m_compose(tc, 2, unit) == FormalSum<>::basis("b(w1,w2)"));
    CHECK(check_operad_axioms(m, 3, 500, 7).pass);
}

TEST_CASE("differential: d(single white) = 0, d^2 = 0 on M(3)") {
    MOperad m(3);
    CHECK(m_differential(parse_tree_key("w1")).is_zero());
    GradedBasis b3 = m.basis(3);
    for (size_t i = 0; i < b3.size(); ++i) {
        FormalSum<> x = FormalSum<>::basis(b3.label(i));
        CHECK(m.differential(m.differential(x)).is_zero());
    }
    // d is a degree +1 derivation of the compositions
    CHECK(check_dg_structure(m, 3, 200, 11).pass);
}

TEST_CASE("rotation: white root to zero; corolla to the two re-rootings") {
    FormalSum<> r = rotation_r(parse_tree_key("b(w1,w2)"));
    CHECK(r.coeff("w1(w2)") == Rational(1));
    CHECK(r.coeff("w2(w1)") == Rational(1));
    CHECK(r.size() == 2);
    CHECK(rotation_r(parse_tree_key("w1(w2)")).is_zero());
}

TEST_CASE("rotational structure on M at arity <= 3") {
    MOperad m(3);
    // R^2 = 0, dR + Rd = 0 on all of M(2), M(3)
    for (size_t n : {2u, 3u}) {
        GradedBasis b = m.basis(n);
        for (size_t i = 0; i < b.size(); ++i) {
            FormalSum<> x = FormalSum<>::basis(b.label(i));
            CHECK(m.rho(m.rho(x)).is_zero());
            CHECK((m.differential(m.rho(x)) + m.rho(m.differential(x))).is_zero());
        }
    }
    // the rotational law on all basis pairs of M(2) x M(2)
    GradedBasis b2 = m.basis(2);
    for (size_t i = 0; i < b2.size(); ++i)
        for (size_t j = 0; j < b2.size(); ++j)
            for (size_t slot = 1; slot <= 2; ++slot) {
                FormalSum<> a = FormalSum<>::basis(b2.label(i));
                FormalSum<> b = FormalSum<>::basis(b2.label(j));
                CHECK(m.rho(m.compose(a, slot, m.rho(b))) ==
                      m.compose(m.rho(a), slot, m.rho(b)));
            }
}

TEST_CASE("H(M)(n) = n! for n = 2, 3") {
    MOperad m(3);
    for (size_t n : {2u, 3u}) {
        GradedComplex cx(m.basis(n), [&](const std::string& k) { return m.differential(k); });
        size_t expect = 1;
        for (size_t j = 2; j <= n; ++j) expect *= j;
        CHECK(cx.total_homology_dim() == expect);
    }
}

TEST_CASE("M_circ homology: dims 1 and 3 at arities 2 and 3") {
    MOperad m(3);
    MCircLevel mc2(m, 2);
    CHECK(total_dim(mc2.homology_dims()) == 1);
    MCircLevel mc3(m, 3);
    CHECK(total_dim(mc3.homology_dims()) == 3);
    // membership certified by a preimage under R
    for (size_t i = 0; i < mc2.dim(); ++i)
        CHECK(m.rho(mc2.preimage(i)) == mc2.vec(i));
}

TEST_CASE("theta route: CC^theta(M) v^0 part maps to M_circ by R as a chain map") {
    MOperad m(3);
    // R(d_theta x) = d(R x) with d_theta = -d: R(-dx) = d(Rx) <=> dR + Rd = 0,
    // and cycles map to cycles; spot check the full composite on basis trees.
    GradedBasis b3 = m.basis(3);
    for (size_t i = 0; i < b3.size(); ++i) {
        FormalSum<> x = FormalSum<>::basis(b3.label(i));
        FormalSum<> lhs = m.rho(-m.differential(x));
        FormalSum<> rhs = m.differential(m.rho(x));
        CHECK(lhs == rhs);
    }
    // operad map on the v^0 level: R(a o_i R(b)) = R(a) o_i R(b) is the law,
    // checked above; here verify R kills the image of R (v |-> 0 composite)
    for (size_t i = 0; i < b3.size(); ++i)
        CHECK(m.rho(m.rho(FormalSum<>::basis(b3.label(i)))).is_zero());
}

TEST_CASE("B suboperad: no blacks, zero differential") {
    BOperad b(3);
    GradedBasis basis = b.basis(3);
    CHECK(basis.size() == 12);
    for (size_t i = 0; i < basis.size(); ++i) {
        CHECK(parse_tree_key(basis.label(i)).count_black() == 0);
    }
}
