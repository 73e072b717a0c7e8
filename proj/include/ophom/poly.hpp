#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ophom/graphs.hpp"
#include "ophom/rational.hpp"
#include "ophom/rng.hpp"

namespace ophom {

// Polynomial-coefficient multivector field on R^d: a polynomial in commuting
// x_1..x_d and anticommuting xi_1..xi_d, tensored with a power of the central
// u (|u| = 2).  Monomials are canonical with the xi factors in ascending
// index order.  degree = xi-degree + 2 * upower.
class Polyvector {
public:
    struct Key {
        std::vector<int> xexp;
        uint32_t ximask = 0;
        auto operator<=>(const Key&) const = default;
    };

    Polyvector() = default;
    explicit Polyvector(int dim, int upower = 0) : dim_(dim), upow_(upower) {}

    static Polyvector monomial(int dim, std::vector<int> xexp, std::vector<int> xi_indices,
                               Rational coeff, int upower = 0);
    static Polyvector constant(int dim, Rational c, int upower = 0);

    int dim() const { return dim_; }
    int upower() const { return upow_; }
    void set_upower(int u) { upow_ = u; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Key, Rational>& terms() const { return terms_; }
    void add_term(const Key& k, const Rational& c);

    int xi_degree() const;  // asserts homogeneity
    int degree() const { return xi_degree() + 2 * upow_; }

    Polyvector operator-() const;
    friend Polyvector operator+(const Polyvector& a, const Polyvector& b);
    friend Polyvector operator-(const Polyvector& a, const Polyvector& b);
    friend Polyvector operator*(const Rational& c, Polyvector a);
    friend bool operator==(const Polyvector& a, const Polyvector& b);

    // wedge (the graded-commutative product); u powers add
    friend Polyvector wedge(const Polyvector& a, const Polyvector& b);

    Polyvector dx(int l) const;   // d/dx_l
    Polyvector dxi(int l) const;  // left d/dxi_l

    std::string str() const;
    std::string to_json() const;
    static Polyvector from_json(const std::string& text);

private:
    int dim_ = 0;
    int upow_ = 0;
    std::map<Key, Rational> terms_;
};

// Schouten-Nijenhuis bracket (odd Poisson bracket, degree -1 in xi-degree);
// u-linear: upowers add.
Polyvector schouten(const Polyvector& x, const Polyvector& y);

// Div X = sum_l d^2 X / dx_l dxi_l (the divergence w.r.t. the standard
// volume form); degree -1, Div^2 = 0.
Polyvector divergence(const Polyvector& x);

// Kontsevich's action of Gra on multivector fields:
//   Gamma(X_1,...,X_k) = (prod_{(i,j) in E(Gamma)} sum_l d/dx_l^(j) ^ d/dxi_l^(i))(X_1 ^...^ X_k)
// Edge operators are applied in the edge order; all upowers must be zero.
Polyvector gra_act(const Graph& g, const std::vector<Polyvector>& args);
Polyvector gra_act(const FormalSum<>& g, const std::vector<Polyvector>& args);

class MultiDiffOp;

// The vKGra action: a graph in vKGra(m, n) sends m multivector fields (with
// u powers) to an n-ary multidifferential operator.  Zero unless the v power
// at each vertex matches the argument's u power; edges into type II vertices
// differentiate the corresponding function slot; a tadpole applies the
// divergence; leftover xi's are projected away.
MultiDiffOp vkgra_act(const Graph& g, const std::vector<Polyvector>& args);
MultiDiffOp vkgra_act(const FormalSum<>& g, const std::vector<Polyvector>& args);

Polyvector random_polyvector(Rng& rng, int dim, int max_xdeg, int xi_deg, int n_terms,
                             int upower = 0);

}  // namespace ophom
