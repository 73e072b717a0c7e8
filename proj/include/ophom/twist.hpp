#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ophom/errors.hpp"
#include "ophom/graphs.hpp"

namespace ophom {

// Graph with internal vertices for the truncated operadic twisting of Gra.
// Type I vertices 1..ext are external (labeled); ext+1..ext+k are internal
// and unlabeled: the canonical form minimizes over their relabelings, with
// the edge-order parity as sign.  A graph with an orientation-reversing
// internal symmetry is zero.
struct TwGraph {
    Graph g;   // g.m = ext + internal count
    int ext = 0;

    int internal_count() const { return g.m - ext; }
    int degree() const { return g.degree() + 2 * internal_count(); }
};

std::optional<std::pair<TwGraph, int>> tw_canonicalize(const TwGraph& t);
std::string tw_key(const TwGraph& canonical);
TwGraph parse_tw_key(const std::string& key);
FormalSum<> tw_term(const TwGraph& t, const Rational& coeff = Rational(1));

// Truncated twisted operad of Gra: arity-n part spanned by graphs with n
// external vertices and at most K internal ones.  The differential is the
// twisting differential (vertex splitting plus the bracket terms); pieces
// that would need more than K internal vertices are returned separately
// rather than silently dropped.
class TwistedGra {
public:
    struct Differential {
        FormalSum<> in_bounds;
        FormalSum<> overflow;  // terms with K+1 internal vertices
    };

    TwistedGra(int max_internal, int max_edges)
        : max_internal_(max_internal), max_edges_(max_edges) {}

    int max_internal() const { return max_internal_; }

    std::vector<std::pair<std::string, int>> basis(int arity) const;

    Differential differential(const std::string& key) const;
    FormalSum<> differential_in_bounds(const FormalSum<>& x) const;

    // insertion at an external vertex; internal vertices accumulate
    FormalSum<> compose(const std::string& a, size_t i, const std::string& b) const;

private:
    int max_internal_;
    int max_edges_;
};

// The Graphs suboperad predicate: every internal vertex at least trivalent
// and every connected component contains an external vertex.
bool graphs_filter_pass(const TwGraph& t);
FormalSum<> graphs_filter(const FormalSum<>& x);

// Kills graphs with tadpoles or v powers on internal type I vertices, then
// graphs violating one of:
//   (1) at least one external type I vertex,
//   (2) no 0-valent internal type I vertices,
//   (3) no 1-valent internal type I vertices with an outgoing edge,
//   (4) no 2-valent internal type I vertices with one incoming and one
//       outgoing edge.
bool vkgraphs_sigma_pass(const TwGraph& t);
FormalSum<> vkgraphs_sigma_filter(const FormalSum<>& x);

// sigma on twisted vKGra graphs: the cyclic action treating internal type I
// vertices like any other type I vertex.
FormalSum<> tw_sigma(const FormalSum<>& x);
FormalSum<> tw_cyclic_project(const FormalSum<>& x, int n2);

// The Ger -> Graphs inclusion on generators: product to the edgeless graph,
// bracket to the two-orientation edge sum (external vertices, no internals).
FormalSum<> ger_to_graphs(const FormalSum<>& ger_realized_in_gra);

// ---- Maurer-Cartan twisting ----

// A shifted-Lie host: bracket and differential on elements of type E.
template <typename E>
struct McHost {
    std::function<E(const E&)> d;
    std::function<E(const E&, const E&)> bracket;
};

// Verifies d(pi) + 1/2 [pi, pi] = 0 and returns the twisted differential
// x -> d(x) + [pi, x].  Throws NotMaurerCartan with the residual.
template <typename E>
std::function<E(const E&)> mc_twist_differential(const McHost<E>& host, const E& pi) {
    E half_sq = Rational(1, 2) * host.bracket(pi, pi);
    E residual = host.d(pi) + half_sq;
    if (!residual.is_zero())
        throw Error(ErrorCode::NotMaurerCartan,
                    "mc_twist: d(pi) + [pi,pi]/2 = " + residual.str());
    return [host, pi](const E& x) { return host.d(x) + host.bracket(pi, x); };
}

}  // namespace ophom
