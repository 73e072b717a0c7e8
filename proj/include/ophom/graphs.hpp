#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ophom/formal_sum.hpp"
#include "ophom/operad.hpp"

namespace ophom {

// Directed graph with two kinds of vertices.  Type I vertices are labeled
// 1..m and may carry powers of v (degree -2 each); type II vertices are
// labeled 1..n2 (drawn with bars) and never source an edge.  Edges are odd
// (degree -1) and their stored order is orientation data: sorting the list
// costs the parity of the permutation.
//
// Edge encoding: source is a type I label (positive); target is a type I
// label (positive) or -j for the type II vertex j-bar.
struct Graph {
    int m = 0;
    int n2 = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> vpow;  // size m

    int degree() const;
    bool has_tadpole() const;
    bool valid() const;
};

// Canonical form: edges sorted by (source, target-kind, |target|).  Returns
// nullopt when the graph is zero (repeated edge).
std::optional<std::pair<Graph, int>> canonicalize(const Graph& g);

std::string graph_key(const Graph& canonical);
Graph parse_graph_key(const std::string& key);

// Canonicalizes and returns sign * key as a one-term sum (or zero).
FormalSum<> graph_term(const Graph& g, const Rational& coeff = Rational(1));

// Insertion of b at the type I vertex i of a: edges incident to i reconnect
// to the vertices of b in all ways, the v-power at i distributes over the
// vertices of b in all ways with coefficient 1, and the edges of a precede
// the edges of b.  b must have no type II vertices.
FormalSum<> gra_compose(const Graph& a, size_t i, const Graph& b);
FormalSum<> gra_compose(const FormalSum<>& a, size_t i, const FormalSum<>& b);

// Insertion of y at the type II vertex j-bar of x: edges of x into j-bar
// reconnect to every vertex of y (both kinds).  The type I inputs of x keep
// labels 1..m_x and those of y become m_x+1..m_x+m_y.
FormalSum<> vkgra_compose_boundary(const Graph& x, size_t j, const Graph& y);
FormalSum<> vkgra_compose_boundary(const FormalSum<>& x, size_t j, const FormalSum<>& y);

// Relabeling of type I vertices: label j becomes perm[j-1].
FormalSum<> graph_sym(const std::vector<size_t>& perm, const Graph& g);

// The vKGra differential: sends v_i to the tadpole at i, extended as a
// derivation (degree +1).
FormalSum<> vkgra_differential(const Graph& g);
FormalSum<> vkgra_differential(const FormalSum<>& x);

// The cyclic Z_{n+1} action on vKGra(m, n): on one-edge graphs
//   sigma(G^i_{jbar}) = G^i_{(j-1)bar}          (j >= 2)
//   sigma(G^i_{1bar}) = -sum_k G^i_{kbar} - sum_k G^{i,k}
//   sigma fixes G^{i,j} and v_i, and is multiplicative.
FormalSum<> vkgra_sigma(const Graph& g);
FormalSum<> vkgra_sigma(const FormalSum<>& x);

// Average over the powers of sigma: the projector onto cyclic invariants.
FormalSum<> vkgra_cyclic_project(const FormalSum<>& x, int n2);

// Delta = {tadpole, -} computed in the ambient operad of graphs with
// tadpoles.  gra_delta additionally asserts that all tadpole terms cancel
// (throws TadpoleResidue otherwise), so it maps Gra to Gra.
FormalSum<> ambient_delta(const FormalSum<>& a);
FormalSum<> gra_delta(const FormalSum<>& a);

// Basis enumeration (canonical keys with degrees).
std::vector<std::pair<std::string, int>> enumerate_gra(int n, int max_edges, bool tadpoles);
std::vector<std::pair<std::string, int>> enumerate_vkgra(int m, int n2, int max_edges, int max_vtotal);

// Graph JSON per the external interface:
//   {"m":2,"n":3,"edges":[[1,2],[1,"b1"]],"v":{"1":1},"sign":1}
std::string graph_to_json(const Graph& g, int sign = 1);
std::pair<Graph, int> graph_from_json(const std::string& text);

// The operad Gra: tadpole-free graphs on type I vertices, zero differential,
// Delta given by the tadpole bracket.
class GraOperad : public DgOperad {
public:
    using DgOperad::compose;
    using DgOperad::sym;
    using DgOperad::differential;
    using DgOperad::mixed_delta;
    using DgOperad::rho;

    GraOperad(size_t max_arity, int max_edges) : max_arity_(max_arity), max_edges_(max_edges) {}
    std::string name() const override { return "Gra"; }
    size_t max_arity() const override { return max_arity_; }
    GradedBasis basis(size_t arity) const override;
    int degree(const std::string& key) const override;
    size_t arity(const std::string& key) const override;
    FormalSum<> compose(const std::string& a, size_t i, const std::string& b) const override;
    FormalSum<> sym(const std::vector<size_t>& perm, const std::string& a) const override;
    bool has_mixed_delta() const override { return true; }
    FormalSum<> mixed_delta(const std::string& a) const override {
        return gra_delta(FormalSum<>::basis(a));
    }

private:
    size_t max_arity_;
    int max_edges_;
};

// The ambient S^1-operad of graphs with tadpoles; delta is the tadpole.
class GraTOperad : public DgOperad {
public:
    using DgOperad::compose;
    using DgOperad::sym;
    using DgOperad::differential;
    using DgOperad::mixed_delta;
    using DgOperad::rho;

    GraTOperad(size_t max_arity, int max_edges) : max_arity_(max_arity), max_edges_(max_edges) {}
    std::string name() const override { return "GraT"; }
    size_t max_arity() const override { return max_arity_; }
    GradedBasis basis(size_t arity) const override;
    int degree(const std::string& key) const override;
    size_t arity(const std::string& key) const override;
    FormalSum<> compose(const std::string& a, size_t i, const std::string& b) const override;
    FormalSum<> sym(const std::vector<size_t>& perm, const std::string& a) const override;
    bool has_mixed_delta() const override { return true; }
    FormalSum<> mixed_delta(const std::string& a) const override {
        return ambient_delta(FormalSum<>::basis(a));
    }
    bool has_delta_element() const override { return true; }
    FormalSum<> delta_element() const override;

private:
    size_t max_arity_;
    int max_edges_;
};

// Distinguished small graphs.
Graph mu_graph();        // two type I vertices, no edges
FormalSum<> b_element(); // G^{1,2} + G^{2,1}
Graph tadpole_graph();   // one vertex, one tadpole

}  // namespace ophom
