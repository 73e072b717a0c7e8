#pragma once

#include <map>
#include <utility>

#include "ophom/graphs.hpp"

namespace ophom {

// The Cyclic Swiss Cheese pair (Gra, vKGra): color 1 operations are graphs
// on type I vertices, color 2 operations are vKGra(m, n) with the cyclic
// Z_{n+1} action.  Cross-color composition inserts a color 1 graph at a type
// I vertex; color 2 composition inserts at a type II vertex.
namespace csc {

// x in vKGra(m, n), g in Gra(k): insertion at the type I vertex i.
FormalSum<> compose_bulk(const FormalSum<>& x, size_t i, const FormalSum<>& g);

// Compositions after the cyclic chain functors on color 1:
//   CC^theta: x ~o_i (g v^k) = x o_i Delta(g) if k = 0, else 0
//   CC^-:     x ~o_i (g u^k) = x o_i g        if k = 0, else 0
FormalSum<> compose_cc_theta(const FormalSum<>& x, size_t i, const FormalSum<>& g, unsigned vpow);
FormalSum<> compose_cc_minus(const FormalSum<>& x, size_t i, const FormalSum<>& g, unsigned upow);

}  // namespace csc

// Totalized space of cyclic invariants prod_n Sigma^n vKGra(m, n)^{Z_{n+1}},
// truncated at n <= max_boundary.  Elements are graded by (m, n); every
// stored component is fixed by sigma (checked after each operation).
class InvariantsBimodule {
public:
    explicit InvariantsBimodule(int max_boundary) : max_n_(max_boundary) {}

    struct Element {
        // (m, n) -> invariant component
        std::map<std::pair<int, int>, FormalSum<>> comps;
        bool is_zero() const { return comps.empty(); }
    };

    int max_boundary() const { return max_n_; }

    // Projects a raw vKGra element onto cyclic invariants.
    Element project(const Graph& g) const;
    Element project(const Element& e) const;

    // Shifted-Lie bracket from the cyclic-operad structure on the boundary
    // compositions: antisymmetrized total insertion at type II vertices.
    // Components beyond the boundary truncation are dropped.
    Element lie_bracket(const Element& a, const Element& b) const;

    // Right action of Gra at the type I slot i.
    Element act_right(const Element& e, size_t i, const FormalSum<>& gra_elt) const;

    bool is_invariant(const Element& e) const;
    void assert_invariant(const Element& e) const;

private:
    int max_n_;
};

}  // namespace ophom
