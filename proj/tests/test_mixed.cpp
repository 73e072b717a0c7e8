#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ophom/errors.hpp"
#include "ophom/ger.hpp"
#include "ophom/mixed.hpp"
#include "ophom/rng.hpp"

using namespace ophom;

namespace {

// the two-dimensional mixed complex span{e (deg 0), f (deg -1)}, d = 0, Delta e = f
MixedComplex two_dim() {
    GradedBasis basis({{"e", 0}, {"f", -1}});
    std::map<std::string, FormalSum<>> delta;
    delta["e"] = FormalSum<>::basis("f");
    return MixedComplex(std::move(basis), {}, std::move(delta));
}

MixedComplex random_mixed(Rng& rng, int dim) {
    // degrees 0 and -1 split: d = 0, Delta maps deg 0 part to deg -1 part
    std::vector<std::pair<std::string, int>> labels;
    int half = dim / 2;
    for (int i = 0; i < half; ++i) labels.emplace_back("a" + std::to_string(i), 0);
    for (int i = half; i < dim; ++i) labels.emplace_back("b" + std::to_string(i), -1);
    GradedBasis basis(labels);
    std::map<std::string, FormalSum<>> delta;
    for (int i = 0; i < half; ++i) {
        FormalSum<> img;
        for (int j = half; j < dim; ++j)
            if (rng.below(2)) img.add("b" + std::to_string(j), Rational(rng.small_nonzero(2)));
        if (!img.is_zero()) delta["a" + std::to_string(i)] = img;
    }
    return MixedComplex(std::move(basis), {}, std::move(delta));
}

}  // namespace

TEST_CASE("mixed complex triple is verified at construction") {
    GradedBasis basis({{"x", 0}, {"y", 1}});
    std::map<std::string, FormalSum<>> d;
    d["x"] = FormalSum<>::basis("y");
    CHECK_NOTHROW(MixedComplex(basis, d, {}));
    // d with wrong degree rejected
    std::map<std::string, FormalSum<>> bad;
    bad["y"] = FormalSum<>::basis("x");
    CHECK_THROWS_AS(MixedComplex(basis, bad, {}), Error);
}

TEST_CASE("tensor with the unit is the identity") {
    MixedComplex a = two_dim();
    MixedComplex t = MixedComplex::tensor(MixedComplex::unit(), a);
    CHECK(t.basis().size() == a.basis().size());
    CHECK(t.basis().dims_by_degree() == a.basis().dims_by_degree());
    // d(a (x) b) = 0 for cycles: everything is a d-cycle here (d = 0)
    for (size_t i = 0; i < t.basis().size(); ++i)
        CHECK(t.d(t.basis().label(i)).is_zero());
}

TEST_CASE("tensor of random mixed complexes is a mixed complex (Koszul rule)") {
    Rng rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        MixedComplex a = random_mixed(rng, 3);
        MixedComplex b = random_mixed(rng, 3);
        // the constructor verifies (Delta_{A(x)B})^2 = 0 and d Delta + Delta d = 0
        CHECK_NOTHROW(MixedComplex::tensor(a, b));
    }
}

TEST_CASE("tensor is strictly associative on flattened labels") {
    Rng rng(37);
    MixedComplex a = random_mixed(rng, 2), b = random_mixed(rng, 3), c = random_mixed(rng, 2);
    MixedComplex left = MixedComplex::tensor(MixedComplex::tensor(a, b), c);
    MixedComplex right = MixedComplex::tensor(a, MixedComplex::tensor(b, c));
    CHECK(left.to_json() == right.to_json());
}

TEST_CASE("cc_minus of the two-dimensional complex has total homology 1") {
    MixedComplex a = two_dim();
    auto stable = a.cc_minus_stable_homology(3);
    CHECK(total_dim(stable) == 1);
    CHECK(stable.count(-1) == 1);  // the class of f at u^0
}

TEST_CASE("cc_minus with Delta = 0 replicates H(A) at each u power") {
    GradedBasis basis({{"x", 0}, {"y", 1}});
    std::map<std::string, FormalSum<>> d;
    d["x"] = FormalSum<>::basis("y");
    MixedComplex a(basis, d, {});
    auto h = a.cc_minus(2).homology_dims();
    CHECK(total_dim(h) == 0);  // H(A) = 0, so every level vanishes

    MixedComplex b(GradedBasis({{"z", 0}}), {}, {});
    auto hb = b.cc_minus(2).homology_dims();
    CHECK(hb[0] == 1);
    CHECK(hb[2] == 1);
    CHECK(hb[4] == 1);
}

TEST_CASE("periodic variant of the two-dimensional complex vanishes in stable bidegrees") {
    MixedComplex a = two_dim();
    auto h4 = a.cc_per(4).homology_dims();
    auto h5 = a.cc_per(5).homology_dims();
    CHECK(total_dim(stable_dims(h4, h5)) == 0);
}

TEST_CASE("short exact sequence dimension additivity per degree") {
    Rng rng(41);
    MixedComplex a = random_mixed(rng, 4);
    unsigned t = 3;
    auto per = a.cc_per(t).basis().dims_by_degree();
    auto minus = a.cc_minus(t).basis().dims_by_degree();
    auto plain = a.cc_plain(t - 1).basis().dims_by_degree();
    for (const auto& [deg, n] : per) {
        size_t m = minus.count(deg) ? minus[deg] : 0;
        // Sigma^{-2} CC: v^l at degree deg corresponds to v^{l+1}, degree deg = base - 2l - 2
        size_t p = plain.count(deg + 2) ? plain[deg + 2] : 0;
        CHECK(n == m + p);
    }
    // Euler characteristics of the homology add up as well
    auto chi = [](const std::map<int, size_t>& dims) {
        long x = 0;
        for (const auto& [d, n] : dims) x += (d % 2 ? -1 : 1) * static_cast<long>(n);
        return x;
    };
    auto hper = a.cc_per(t).homology_dims();
    auto hminus = a.cc_minus(t).homology_dims();
    auto hplain = a.cc_plain(t - 1).homology_dims();
    long shifted = 0;
    for (const auto& [d, n] : hplain) shifted += ((d - 2) % 2 ? -1 : 1) * static_cast<long>(n);
    CHECK(chi(hper) == chi(hminus) + shifted);
}

TEST_CASE("cc_minus homology of (Ger(n)[u], uR) is Im(R): criterion 3 shape") {
    GerOperad ger(3);
    for (size_t n : {2u, 3u}) {
        GradedBasis basis = ger.basis(n);
        std::vector<std::pair<std::string, int>> labels;
        for (size_t i = 0; i < basis.size(); ++i) labels.emplace_back(basis.label(i), basis.degree(i));
        std::map<std::string, FormalSum<>> delta;
        for (size_t i = 0; i < basis.size(); ++i) {
            FormalSum<> img = ger.mixed_delta(basis.label(i));
            if (!img.is_zero()) delta[basis.label(i)] = img;
        }
        MixedComplex a(GradedBasis(labels), {}, delta);
        auto stable = a.cc_minus_stable_homology(4);
        SparseMatrix r = ger.r_matrix(n);
        CHECK(total_dim(stable) == r.cols() - r.rank());
    }
}

TEST_CASE("mixed complex JSON round trip") {
    MixedComplex a = two_dim();
    MixedComplex b = MixedComplex::from_json(a.to_json());
    CHECK(a.to_json() == b.to_json());
}
