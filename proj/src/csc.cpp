#include "ophom/csc.hpp"

#include "ophom/errors.hpp"

namespace ophom {

namespace csc {

FormalSum<> compose_bulk(const FormalSum<>& x, size_t i, const FormalSum<>& g) {
    return gra_compose(x, i, g);
}

FormalSum<> compose_cc_theta(const FormalSum<>& x, size_t i, const FormalSum<>& g, unsigned vpow) {
    if (vpow > 0) return {};
    return gra_compose(x, i, gra_delta(g));
}

FormalSum<> compose_cc_minus(const FormalSum<>& x, size_t i, const FormalSum<>& g, unsigned upow) {
    if (upow > 0) return {};
    return gra_compose(x, i, g);
}

}  // namespace csc

InvariantsBimodule::Element InvariantsBimodule::project(const Graph& g) const {
    Element out;
    if (g.n2 > max_n_) throw Error(ErrorCode::BoundExceeded, "invariants: boundary beyond bound");
    FormalSum<> p = vkgra_cyclic_project(graph_term(g), g.n2);
    if (!p.is_zero()) out.comps[{g.m, g.n2}] = std::move(p);
    return out;
}

InvariantsBimodule::Element InvariantsBimodule::project(const Element& e) const {
    Element out;
    for (const auto& [mn, v] : e.comps) {
        if (mn.second > max_n_) continue;
        FormalSum<> p = vkgra_cyclic_project(v, mn.second);
        if (!p.is_zero()) out.comps[mn] = std::move(p);
    }
    return out;
}

bool InvariantsBimodule::is_invariant(const Element& e) const {
    for (const auto& [mn, v] : e.comps)
        if (!(vkgra_sigma(v) == v)) return false;
    return true;
}

void InvariantsBimodule::assert_invariant(const Element& e) const {
    if (!is_invariant(e))
        throw Error(ErrorCode::Usage, "invariants bimodule: element escaped the invariant subspace");
}

InvariantsBimodule::Element InvariantsBimodule::lie_bracket(const Element& a,
                                                            const Element& b) const {
    Element out;
    auto accumulate = [&](const FormalSum<>& x, int nx, const FormalSum<>& y, int ny, int my,
                          const Rational& scale) {
        if (nx == 0) return;
        int n = nx + ny - 1;
        if (n > max_n_) return;
        for (int j = 1; j <= nx; ++j) {
            FormalSum<> part = vkgra_compose_boundary(x, static_cast<size_t>(j), y);
            part *= scale;
            if (part.is_zero()) continue;
            for (const auto& [k, c] : part.terms()) {
                Graph g = parse_graph_key(k);
                FormalSum<> one;
                one.add(k, c);
                out.comps[{g.m, g.n2}] += one;
            }
        }
        (void)my;
    };
    for (const auto& [mna, va] : a.comps)
        for (const auto& [mnb, vb] : b.comps) {
            // total degree in the shifted grading: graph degree + n
            int da = 0, db = 0;
            if (!va.is_zero()) da = parse_graph_key(va.terms().begin()->first).degree() + mna.second;
            if (!vb.is_zero()) db = parse_graph_key(vb.terms().begin()->first).degree() + mnb.second;
            accumulate(va, mna.second, vb, mnb.second, mnb.first, Rational(1));
            Rational sign(((da + 1) * (db + 1)) % 2 ? 1 : -1);
            accumulate(vb, mnb.second, va, mna.second, mna.first, sign);
        }
    for (auto it = out.comps.begin(); it != out.comps.end();)
        it = it->second.is_zero() ? out.comps.erase(it) : std::next(it);
    assert_invariant(out);
    return out;
}

InvariantsBimodule::Element InvariantsBimodule::act_right(const Element& e, size_t i,
                                                          const FormalSum<>& gra_elt) const {
    Element out;
    for (const auto& [mn, v] : e.comps) {
        if (i < 1 || static_cast<int>(i) > mn.first) continue;
        FormalSum<> part = gra_compose(v, i, gra_elt);
        if (part.is_zero()) continue;
        for (const auto& [k, c] : part.terms()) {
            Graph g = parse_graph_key(k);
            FormalSum<> one;
            one.add(k, c);
            out.comps[{g.m, g.n2}] += one;
        }
    }
    for (auto it = out.comps.begin(); it != out.comps.end();)
        it = it->second.is_zero() ? out.comps.erase(it) : std::next(it);
    assert_invariant(out);
    return out;
}

}  // namespace ophom
