#pragma once

#include <map>
#include <string>
#include <vector>

#include "ophom/poly.hpp"
#include "ophom/rational.hpp"

namespace ophom {

// Polynomial-coefficient multidifferential operator on R^d:
//   sum  f(x) . d_{I_1} (x) ... (x) d_{I_n}
// acting on n smooth functions.  Multi-indices are kept sorted (partial
// derivatives commute).  Empty multi-indices are representable; membership in
// the normalized subspace (vanishing on constants) is a predicate, not a type
// invariant, since the cyclic action and the product mu leave that subspace.
//
// Grading: an arity-n operator sits in degree n, so the Gerstenhaber total
// composition carries the sign (-1)^{(i-1)(|D'|-1)} with |D'| = arity(D').
class MultiDiffOp {
public:
    struct Key {
        std::vector<int> xexp;
        std::vector<std::vector<int>> I;  // size = arity, each sorted
        auto operator<=>(const Key&) const = default;
    };

    MultiDiffOp() = default;
    MultiDiffOp(int dim, int arity) : dim_(dim), arity_(arity) {}

    static MultiDiffOp mu(int dim);  // the product (f, g) |-> f g

    int dim() const { return dim_; }
    int arity() const { return arity_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Key, Rational>& terms() const { return terms_; }
    void add_term(const Key& k, const Rational& c);

    MultiDiffOp operator-() const;
    friend MultiDiffOp operator+(const MultiDiffOp& a, const MultiDiffOp& b);
    friend MultiDiffOp operator-(const MultiDiffOp& a, const MultiDiffOp& b);
    friend MultiDiffOp operator*(const Rational& c, MultiDiffOp a);
    friend bool operator==(const MultiDiffOp& a, const MultiDiffOp& b);

    bool vanishes_on_constants() const;

    std::string str() const;
    std::string to_json() const;
    static MultiDiffOp from_json(const std::string& text);

private:
    int dim_ = 0;
    int arity_ = 0;
    std::map<Key, Rational> terms_;
};

// Endomorphism-operad insertion D o_i D' (Leibniz expansion of the slot
// derivatives over the inserted operator).
MultiDiffOp gerst_compose(const MultiDiffOp& d, size_t i, const MultiDiffOp& dp);

// Total composition D o D' = sum_i (-1)^{(i-1)(|D'|-1)} D o_i D'.
MultiDiffOp gerst_total(const MultiDiffOp& d, const MultiDiffOp& dp);

// [D, D'] = D o D' - (-1)^{(|D|-1)(|D'|-1)} D' o D.
MultiDiffOp gerst_bracket(const MultiDiffOp& d, const MultiDiffOp& dp);

// d_Hoch = [mu, -]; squares to zero.
MultiDiffOp hochschild_d(const MultiDiffOp& d);

// The cyclic action by integration by parts: form f_0 . D(f_1,...,f_n),
// rotate the slots, and strip every derivative from the new output slot.
// sigma^{n+1} = id.
MultiDiffOp cyclic_sigma(const MultiDiffOp& d);

// Average of sigma^0..sigma^n: projector onto cyclic invariants.
MultiDiffOp cyclic_project(const MultiDiffOp& d);

// HKR: a k-vector field X maps to (1/k!) sum_tau sgn(tau) X^{i_tau(1)...} d_i x...x d_i.
MultiDiffOp hkr(const Polyvector& x);

MultiDiffOp random_mdo(Rng& rng, int dim, int arity, int max_xdeg, int max_order, int n_terms);

}  // namespace ophom
