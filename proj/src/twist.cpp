#include "ophom/twist.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "ophom/errors.hpp"

namespace ophom {

namespace {

std::vector<std::vector<size_t>> perms_of(size_t k) {
    std::vector<size_t> p(k);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<size_t>> out;
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

Graph relabel_internals(const Graph& g, int ext, const std::vector<size_t>& perm) {
    auto map_v = [&](int v) {
        if (v <= ext) return v;
        return ext + static_cast<int>(perm[static_cast<size_t>(v - ext - 1)]) + 1;
    };
    Graph h;
    h.m = g.m;
    h.n2 = g.n2;
    h.vpow.assign(static_cast<size_t>(g.m), 0);
    for (int v = 1; v <= g.m; ++v)
        h.vpow[static_cast<size_t>(map_v(v) - 1)] = g.vpow[static_cast<size_t>(v - 1)];
    for (const auto& [s, t] : g.edges) h.edges.emplace_back(map_v(s), t > 0 ? map_v(t) : t);
    return h;
}

}  // namespace

std::optional<std::pair<TwGraph, int>> tw_canonicalize(const TwGraph& t) {
    int k = t.internal_count();
    if (k < 0) throw Error(ErrorCode::Usage, "tw_canonicalize: negative internal count");
    std::optional<std::pair<Graph, int>> best;
    bool killed = false;
    for (const auto& perm : perms_of(static_cast<size_t>(k))) {
        Graph h = relabel_internals(t.g, t.ext, perm);
        auto canon = canonicalize(h);
        if (!canon) continue;  // repeated edge under this labeling: zero term anyway
        if (!best) {
            best = canon;
        } else {
            std::string a = graph_key(canon->first), b = graph_key(best->first);
            if (a < b) best = canon;
            else if (a == b && canon->second != best->second) killed = true;
        }
    }
    if (!best || killed) return std::nullopt;
    return std::make_pair(TwGraph{best->first, t.ext}, best->second);
}

std::string tw_key(const TwGraph& t) {
    return "W" + std::to_string(t.ext) + "|" + graph_key(t.g);
}

TwGraph parse_tw_key(const std::string& key) {
    if (key.empty() || key[0] != 'W') throw Error(ErrorCode::Usage, "bad tw key: " + key);
    size_t bar = key.find('|');
    TwGraph t;
    t.ext = std::stoi(key.substr(1, bar - 1));
    t.g = parse_graph_key(key.substr(bar + 1));
    return t;
}

FormalSum<> tw_term(const TwGraph& t, const Rational& coeff) {
    auto canon = tw_canonicalize(t);
    FormalSum<> out;
    if (!canon) return out;
    out.add(tw_key(canon->first), coeff * Rational(canon->second));
    return out;
}

std::vector<std::pair<std::string, int>> TwistedGra::basis(int arity) const {
    std::vector<std::pair<std::string, int>> out;
    for (int k = 0; k <= max_internal_; ++k) {
        int m = arity + k;
        std::vector<std::pair<int, int>> all_edges;
        for (int s = 1; s <= m; ++s)
            for (int t = 1; t <= m; ++t)
                if (s != t) all_edges.emplace_back(s, t);
        std::vector<std::pair<int, int>> cur;
        std::function<void(size_t)> rec = [&](size_t next) {
            Graph g;
            g.m = m;
            g.n2 = 0;
            g.edges = cur;
            g.vpow.assign(static_cast<size_t>(m), 0);
            TwGraph t{g, arity};
            auto canon = tw_canonicalize(t);
            if (canon && graph_key(canon->first.g) == graph_key(g))  // canonical representative only
                out.emplace_back(tw_key(canon->first), t.degree());
            if (static_cast<int>(cur.size()) >= max_edges_) return;
            for (size_t e = next; e < all_edges.size(); ++e) {
                cur.push_back(all_edges[e]);
                rec(e + 1);
                cur.pop_back();
            }
        };
        rec(0);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

TwistedGra::Differential TwistedGra::differential(const std::string& key) const {
    TwGraph t = parse_tw_key(key);
    Differential out;
    const Graph& g = t.g;
    int m = g.m;
    int w = m + 1;  // the new internal vertex
    bool overflowing = t.internal_count() + 1 > max_internal_;

    // endpoint slots at each vertex: (edge index, end) with end 0 = source
    for (int v = 1; v <= m; ++v) {
        std::vector<std::pair<size_t, int>> slots;
        for (size_t e = 0; e < g.edges.size(); ++e) {
            if (g.edges[e].first == v) slots.push_back({e, 0});
            if (g.edges[e].second == v) slots.push_back({e, 1});
        }
        size_t ns = slots.size();
        for (uint64_t mask = 1; mask < (1ull << ns); ++mask) {
            for (int orient = 0; orient < 2; ++orient) {
                Graph h;
                h.m = m + 1;
                h.n2 = g.n2;
                h.vpow = g.vpow;
                h.vpow.push_back(0);
                // the new edge comes first in the edge order
                h.edges.emplace_back(orient == 0 ? v : w, orient == 0 ? w : v);
                for (size_t e = 0; e < g.edges.size(); ++e) h.edges.push_back(g.edges[e]);
                for (size_t s = 0; s < ns; ++s)
                    if ((mask >> s) & 1) {
                        auto& edge = h.edges[slots[s].first + 1];
                        (slots[s].second == 0 ? edge.first : edge.second) = w;
                    }
                FormalSum<> term = tw_term(TwGraph{h, t.ext});
                (overflowing ? out.overflow : out.in_bounds) += term;
            }
        }
    }
    return out;
}

FormalSum<> TwistedGra::differential_in_bounds(const FormalSum<>& x) const {
    FormalSum<> out;
    for (const auto& [k, c] : x.terms()) {
        FormalSum<> part = differential(k).in_bounds;
        part *= c;
        out += part;
    }
    return out;
}

FormalSum<> TwistedGra::compose(const std::string& a, size_t i, const std::string& b) const {
    TwGraph ta = parse_tw_key(a), tb = parse_tw_key(b);
    if (i < 1 || static_cast<int>(i) > ta.ext)
        throw Error(ErrorCode::ArityMismatch, "tw compose: slot out of range");
    if (ta.internal_count() + tb.internal_count() > max_internal_) return {};
    int ii = static_cast<int>(i);
    int ea = ta.ext, eb = tb.ext;
    int ext = ea + eb - 1;
    int ka = ta.internal_count(), kb = tb.internal_count();
    // composite vertex numbering: externals 1..ext, then a's internals, b's internals
    auto map_a = [&](int v) {
        if (v <= ea) {  // external of a
            if (v < ii) return v;
            return v + eb - 1;  // v > ii
        }
        return ext + (v - ea);  // internal of a
    };
    auto map_b = [&](int v) {
        if (v <= eb) return ii + v - 1;
        return ext + ka + (v - eb);
    };
    // endpoints of a touching ii reconnect over all of b's vertices
    struct Slot { size_t edge; bool is_source; };
    std::vector<Slot> slots;
    std::vector<std::pair<int, int>> base_edges;
    for (size_t e = 0; e < ta.g.edges.size(); ++e) {
        auto [src, tgt] = ta.g.edges[e];
        if (src == ii) slots.push_back({e, true});
        if (tgt == ii) slots.push_back({e, false});
        base_edges.emplace_back(src == ii ? 0 : map_a(src),
                                tgt == ii ? 0 : (tgt < 0 ? tgt : map_a(tgt)));
    }
    std::vector<int> b_vertices;
    for (int v = 1; v <= tb.g.m; ++v) b_vertices.push_back(map_b(v));

    FormalSum<> out;
    std::vector<size_t> choice(slots.size(), 0);
    for (;;) {
        Graph h;
        h.m = ext + ka + kb;
        h.n2 = ta.g.n2;
        h.edges = base_edges;
        for (size_t s = 0; s < slots.size(); ++s) {
            auto& e = h.edges[slots[s].edge];
            (slots[s].is_source ? e.first : e.second) = b_vertices[choice[s]];
        }
        for (const auto& [src, tgt] : tb.g.edges)
            h.edges.emplace_back(map_b(src), tgt > 0 ? map_b(tgt) : tgt);
        h.vpow.assign(static_cast<size_t>(h.m), 0);
        for (int v = 1; v <= ta.g.m; ++v)
            if (v != ii) h.vpow[static_cast<size_t>(map_a(v) - 1)] = ta.g.vpow[static_cast<size_t>(v - 1)];
        for (int v = 1; v <= tb.g.m; ++v)
            h.vpow[static_cast<size_t>(map_b(v) - 1)] += tb.g.vpow[static_cast<size_t>(v - 1)];
        // v powers at the replaced vertex distribute over b's vertices
        int p = ta.g.vpow[static_cast<size_t>(ii - 1)];
        if (p == 0) {
            out += tw_term(TwGraph{h, ext});
        } else {
            std::function<void(int, int, Graph&)> dist = [&](int idx, int rest, Graph& cur) {
                if (idx == tb.g.m - 1) {
                    Graph fin = cur;
                    fin.vpow[static_cast<size_t>(b_vertices[static_cast<size_t>(idx)] - 1)] += rest;
                    out += tw_term(TwGraph{fin, ext});
                    return;
                }
                for (int q = 0; q <= rest; ++q) {
                    Graph nxt = cur;
                    nxt.vpow[static_cast<size_t>(b_vertices[static_cast<size_t>(idx)] - 1)] += q;
                    dist(idx + 1, rest - q, nxt);
                }
            };
            dist(0, p, h);
        }
        size_t s = 0;
        while (s < choice.size() && ++choice[s] == b_vertices.size()) choice[s++] = 0;
        if (s == choice.size()) break;
    }
    return out;
}

namespace {

// undirected valence per type I vertex; a tadpole counts twice
std::vector<int> valences(const Graph& g) {
    std::vector<int> val(static_cast<size_t>(g.m), 0);
    for (const auto& [s, t] : g.edges) {
        ++val[static_cast<size_t>(s - 1)];
        if (t > 0) ++val[static_cast<size_t>(t - 1)];
    }
    return val;
}

std::vector<int> component_of(const Graph& g) {
    // union-find over type I and type II vertices (type II at m + j)
    int n = g.m + g.n2;
    std::vector<int> parent(static_cast<size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<size_t>(x)] != x) x = parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
        return x;
    };
    for (const auto& [s, t] : g.edges) {
        int a = s - 1;
        int b = t > 0 ? t - 1 : g.m + (-t) - 1;
        parent[static_cast<size_t>(find(a))] = find(b);
    }
    std::vector<int> comp(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) comp[static_cast<size_t>(i)] = find(i);
    return comp;
}

}  // namespace

bool graphs_filter_pass(const TwGraph& t) {
    const Graph& g = t.g;
    auto val = valences(g);
    for (int v = t.ext + 1; v <= g.m; ++v)
        if (val[static_cast<size_t>(v - 1)] < 3) return false;
    auto comp = component_of(g);
    // every component must contain an external vertex (isolated externals ok)
    std::vector<bool> has_ext(static_cast<size_t>(g.m + g.n2 + 1), false);
    for (int v = 1; v <= t.ext; ++v) has_ext[static_cast<size_t>(comp[static_cast<size_t>(v - 1)])] = true;
    for (int v = t.ext + 1; v <= g.m; ++v)
        if (!has_ext[static_cast<size_t>(comp[static_cast<size_t>(v - 1)])]) return false;
    return true;
}

FormalSum<> graphs_filter(const FormalSum<>& x) {
    FormalSum<> out;
    for (const auto& [k, c] : x.terms())
        if (graphs_filter_pass(parse_tw_key(k))) out.add(k, c);
    return out;
}

bool vkgraphs_sigma_pass(const TwGraph& t) {
    const Graph& g = t.g;
    // internal type I vertices may not carry tadpoles or v powers
    for (int v = t.ext + 1; v <= g.m; ++v)
        if (g.vpow[static_cast<size_t>(v - 1)] != 0) return false;
    for (const auto& [s, tt] : g.edges)
        if (s == tt && s > t.ext) return false;
    // (1) at least one external type I vertex
    if (t.ext < 1) return false;
    std::vector<int> in(static_cast<size_t>(g.m), 0), outdeg(static_cast<size_t>(g.m), 0);
    for (const auto& [s, tt] : g.edges) {
        ++outdeg[static_cast<size_t>(s - 1)];
        if (tt > 0) ++in[static_cast<size_t>(tt - 1)];
    }
    for (int v = t.ext + 1; v <= g.m; ++v) {
        int i = in[static_cast<size_t>(v - 1)], o = outdeg[static_cast<size_t>(v - 1)];
        if (i + o == 0) return false;                 // (2)
        if (i + o == 1 && o == 1) return false;       // (3)
        if (i == 1 && o == 1) return false;           // (4)
    }
    return true;
}

FormalSum<> vkgraphs_sigma_filter(const FormalSum<>& x) {
    FormalSum<> out;
    for (const auto& [k, c] : x.terms())
        if (vkgraphs_sigma_pass(parse_tw_key(k))) out.add(k, c);
    return out;
}

FormalSum<> tw_sigma(const FormalSum<>& x) {
    FormalSum<> out;
    for (const auto& [k, c] : x.terms()) {
        TwGraph t = parse_tw_key(k);
        FormalSum<> s = vkgra_sigma(t.g);
        for (const auto& [gk, gc] : s.terms()) {
            FormalSum<> part = tw_term(TwGraph{parse_graph_key(gk), t.ext}, gc * c);
            out += part;
        }
    }
    return out;
}

FormalSum<> tw_cyclic_project(const FormalSum<>& x, int n2) {
    FormalSum<> acc = x, cur = x;
    for (int j = 1; j <= n2; ++j) {
        cur = tw_sigma(cur);
        acc += cur;
    }
    acc *= Rational(1, n2 + 1);
    return acc;
}

FormalSum<> ger_to_graphs(const FormalSum<>& x) {
    FormalSum<> out;
    for (const auto& [k, c] : x.terms()) {
        Graph g = parse_graph_key(k);
        out += tw_term(TwGraph{g, g.m}, c);
    }
    return out;
}

}  // namespace ophom
