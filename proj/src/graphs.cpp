#include "ophom/graphs.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <numeric>

#include "json.hpp"
#include "ophom/errors.hpp"

namespace ophom {

namespace {

// Edge order: by source, then type I targets before type II, then label.
inline std::tuple<int, int, int> edge_rank(const std::pair<int, int>& e) {
    return {e.first, e.second < 0 ? 1 : 0, std::abs(e.second)};
}

int sort_sign(std::vector<std::pair<int, int>>& edges) {
    // insertion sort with transposition count; detects duplicates via equal ranks
    int sign = 1;
    for (size_t i = 1; i < edges.size(); ++i)
        for (size_t j = i; j > 0 && edge_rank(edges[j]) < edge_rank(edges[j - 1]); --j) {
            std::swap(edges[j], edges[j - 1]);
            sign = -sign;
        }
    for (size_t i = 1; i < edges.size(); ++i)
        if (edges[i] == edges[i - 1]) return 0;
    return sign;
}

std::vector<std::vector<int>> compositions(int total, int parts) {
    // all ordered ways to write total as a sum of `parts` nonnegative integers
    std::vector<std::vector<int>> out;
    if (parts == 0) {
        if (total == 0) out.push_back({});
        return out;
    }
    std::vector<int> cur(static_cast<size_t>(parts), 0);
    std::function<void(int, int)> rec = [&](int idx, int rest) {
        if (idx == parts - 1) {
            cur[static_cast<size_t>(idx)] = rest;
            out.push_back(cur);
            return;
        }
        for (int k = 0; k <= rest; ++k) {
            cur[static_cast<size_t>(idx)] = k;
            rec(idx + 1, rest - k);
        }
    };
    rec(0, total);
    return out;
}

}  // namespace

int Graph::degree() const {
    int v = std::accumulate(vpow.begin(), vpow.end(), 0);
    return -static_cast<int>(edges.size()) - 2 * v;
}

bool Graph::has_tadpole() const {
    for (const auto& [s, t] : edges)
        if (s == t) return true;
    return false;
}

bool Graph::valid() const {
    if (static_cast<int>(vpow.size()) != m) return false;
    for (const auto& [s, t] : edges) {
        if (s < 1 || s > m) return false;  // no edge starts on a type II vertex
        if (t == 0 || t > m || -t > n2) return false;
        if (vpow.size() != static_cast<size_t>(m)) return false;
    }
    for (int p : vpow)
        if (p < 0) return false;
    return true;
}

std::optional<std::pair<Graph, int>> canonicalize(const Graph& g) {
    Graph out = g;
    int sign = sort_sign(out.edges);
    if (sign == 0) return std::nullopt;
    return std::make_pair(std::move(out), sign);
}

std::string graph_key(const Graph& g) {
    std::string s = "G" + std::to_string(g.m) + "." + std::to_string(g.n2) + "|";
    bool first = true;
    for (const auto& [src, tgt] : g.edges) {
        if (!first) s += ",";
        first = false;
        s += std::to_string(src) + ">";
        s += tgt > 0 ? std::to_string(tgt) : "b" + std::to_string(-tgt);
    }
    s += "|";
    for (int i = 0; i < g.m; ++i) {
        if (i) s += ",";
        s += std::to_string(g.vpow[static_cast<size_t>(i)]);
    }
    return s;
}

Graph parse_graph_key(const std::string& key) {
    if (key.empty() || key[0] != 'G') throw Error(ErrorCode::Usage, "bad graph key: " + key);
    size_t dot = key.find('.'), bar1 = key.find('|'), bar2 = key.find('|', bar1 + 1);
    if (dot == std::string::npos || bar1 == std::string::npos || bar2 == std::string::npos)
        throw Error(ErrorCode::Usage, "bad graph key: " + key);
    Graph g;
    g.m = std::stoi(key.substr(1, dot - 1));
    g.n2 = std::stoi(key.substr(dot + 1, bar1 - dot - 1));
    std::string edges = key.substr(bar1 + 1, bar2 - bar1 - 1);
    size_t pos = 0;
    while (pos < edges.size()) {
        size_t comma = edges.find(',', pos);
        if (comma == std::string::npos) comma = edges.size();
        std::string e = edges.substr(pos, comma - pos);
        size_t gt = e.find('>');
        int src = std::stoi(e.substr(0, gt));
        std::string t = e.substr(gt + 1);
        int tgt = t[0] == 'b' ? -std::stoi(t.substr(1)) : std::stoi(t);
        g.edges.emplace_back(src, tgt);
        pos = comma + 1;
    }
    std::string vs = key.substr(bar2 + 1);
    pos = 0;
    while (pos < vs.size()) {
        size_t comma = vs.find(',', pos);
        if (comma == std::string::npos) comma = vs.size();
        g.vpow.push_back(std::stoi(vs.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    if (static_cast<int>(g.vpow.size()) != g.m)
        throw Error(ErrorCode::Usage, "bad graph key vpow: " + key);
    return g;
}

FormalSum<> graph_term(const Graph& g, const Rational& coeff) {
    auto canon = canonicalize(g);
    FormalSum<> out;
    if (!canon) return out;
    out.add(graph_key(canon->first), coeff * Rational(canon->second));
    return out;
}

FormalSum<> gra_compose(const Graph& a, size_t i, const Graph& b) {
    if (i < 1 || static_cast<int>(i) > a.m)
        throw Error(ErrorCode::ArityMismatch, "gra_compose: slot out of range");
    if (b.n2 != 0)
        throw Error(ErrorCode::ArityMismatch, "gra_compose: inserted graph has type II vertices");
    const int ii = static_cast<int>(i);
    const int shift = b.m - 1;
    auto relabel_a = [&](int x) { return x > ii ? x + shift : x; };  // for x != ii
    auto relabel_b = [&](int x) { return ii + x - 1; };

    // Collect endpoint slots touching vertex i of a.
    struct Slot { size_t edge; bool is_source; };
    std::vector<Slot> slots;
    std::vector<std::pair<int, int>> base_edges;
    for (size_t e = 0; e < a.edges.size(); ++e) {
        auto [src, tgt] = a.edges[e];
        if (src == ii) slots.push_back({e, true});
        if (tgt == ii) slots.push_back({e, false});
        base_edges.emplace_back(src == ii ? 0 : relabel_a(src),
                                tgt == ii ? 0 : (tgt < 0 ? tgt : relabel_a(tgt)));
    }

    FormalSum<> out;
    std::vector<int> choice(slots.size(), 0);  // each in 0..b.m-1
    const auto vdists = compositions(a.vpow[static_cast<size_t>(ii - 1)], b.m);
    for (;;) {
        Graph g;
        g.m = a.m + b.m - 1;
        g.n2 = a.n2;
        g.edges = base_edges;
        for (size_t s = 0; s < slots.size(); ++s) {
            int lbl = relabel_b(choice[s] + 1);
            auto& e = g.edges[slots[s].edge];
            (slots[s].is_source ? e.first : e.second) = lbl;
        }
        for (const auto& [src, tgt] : b.edges)
            g.edges.emplace_back(relabel_b(src), tgt > 0 ? relabel_b(tgt) : tgt);
        g.vpow.assign(static_cast<size_t>(g.m), 0);
        for (int x = 1; x <= a.m; ++x)
            if (x != ii) g.vpow[static_cast<size_t>(relabel_a(x) - 1)] = a.vpow[static_cast<size_t>(x - 1)];
        for (int y = 1; y <= b.m; ++y)
            g.vpow[static_cast<size_t>(relabel_b(y) - 1)] = b.vpow[static_cast<size_t>(y - 1)];
        for (const auto& dist : vdists) {
            Graph h = g;
            for (int y = 1; y <= b.m; ++y)
                h.vpow[static_cast<size_t>(relabel_b(y) - 1)] += dist[static_cast<size_t>(y - 1)];
            out += graph_term(h);
        }
        // next reconnection choice
        size_t k = 0;
        while (k < choice.size() && ++choice[k] == b.m) choice[k++] = 0;
        if (k == choice.size()) break;
    }
    return out;
}

FormalSum<> gra_compose(const FormalSum<>& a, size_t i, const FormalSum<>& b) {
    FormalSum<> out;
    for (const auto& [ka, ca] : a.terms())
        for (const auto& [kb, cb] : b.terms()) {
            FormalSum<> part = gra_compose(parse_graph_key(ka), i, parse_graph_key(kb));
            part *= ca * cb;
            out += part;
        }
    return out;
}

FormalSum<> vkgra_compose_boundary(const Graph& x, size_t j, const Graph& y) {
    if (j < 1 || static_cast<int>(j) > x.n2)
        throw Error(ErrorCode::ArityMismatch, "boundary compose: slot out of range");
    const int jj = static_cast<int>(j);
    // targets of y, in the composite labeling: type I m_x+1..m_x+m_y, type II j..j+n_y-1
    std::vector<int> y_targets;
    for (int t = 1; t <= y.m; ++t) y_targets.push_back(x.m + t);
    for (int t = 1; t <= y.n2; ++t) y_targets.push_back(-(jj + t - 1));

    auto relabel_x_t2 = [&](int t) { return t < jj ? t : t + y.n2 - 1; };  // for t != jj

    std::vector<std::pair<int, int>> base_edges;
    std::vector<size_t> slots;  // edges of x whose target is jj-bar
    for (size_t e = 0; e < x.edges.size(); ++e) {
        auto [src, tgt] = x.edges[e];
        int nt;
        if (tgt == -jj) { slots.push_back(e); nt = 0; }
        else nt = tgt > 0 ? tgt : -relabel_x_t2(-tgt);
        base_edges.emplace_back(src, nt);
    }

    FormalSum<> out;
    std::vector<size_t> choice(slots.size(), 0);
    for (;;) {
        Graph g;
        g.m = x.m + y.m;
        g.n2 = x.n2 + y.n2 - 1;
        g.edges = base_edges;
        for (size_t s = 0; s < slots.size(); ++s) g.edges[slots[s]].second = y_targets[choice[s]];
        for (const auto& [src, tgt] : y.edges)
            g.edges.emplace_back(x.m + src, tgt > 0 ? x.m + tgt : -(jj + (-tgt) - 1));
        g.vpow.assign(static_cast<size_t>(g.m), 0);
        for (int v = 1; v <= x.m; ++v) g.vpow[static_cast<size_t>(v - 1)] = x.vpow[static_cast<size_t>(v - 1)];
        for (int v = 1; v <= y.m; ++v) g.vpow[static_cast<size_t>(x.m + v - 1)] = y.vpow[static_cast<size_t>(v - 1)];
        out += graph_term(g);
        size_t k = 0;
        while (k < choice.size() && ++choice[k] == y_targets.size()) choice[k++] = 0;
        if (k == choice.size()) break;
    }
    return out;
}

FormalSum<> vkgra_compose_boundary(const FormalSum<>& x, size_t j, const FormalSum<>& y) {
    FormalSum<> out;
    for (const auto& [kx, cx] : x.terms())
        for (const auto& [ky, cy] : y.terms()) {
            FormalSum<> part = vkgra_compose_boundary(parse_graph_key(kx), j, parse_graph_key(ky));
            part *= cx * cy;
            out += part;
        }
    return out;
}

FormalSum<> graph_sym(const std::vector<size_t>& perm, const Graph& g) {
    if (perm.size() != static_cast<size_t>(g.m))
        throw Error(ErrorCode::ArityMismatch, "graph_sym: permutation size");
    Graph h;
    h.m = g.m;
    h.n2 = g.n2;
    h.vpow.assign(static_cast<size_t>(g.m), 0);
    for (int v = 1; v <= g.m; ++v)
        h.vpow[perm[static_cast<size_t>(v - 1)] - 1] = g.vpow[static_cast<size_t>(v - 1)];
    for (const auto& [src, tgt] : g.edges)
        h.edges.emplace_back(static_cast<int>(perm[static_cast<size_t>(src - 1)]),
                             tgt > 0 ? static_cast<int>(perm[static_cast<size_t>(tgt - 1)]) : tgt);
    return graph_term(h);
}

FormalSum<> vkgra_differential(const Graph& g) {
    FormalSum<> out;
    for (int i = 1; i <= g.m; ++i) {
        int p = g.vpow[static_cast<size_t>(i - 1)];
        if (p == 0) continue;
        Graph h = g;
        h.vpow[static_cast<size_t>(i - 1)] = p - 1;
        h.edges.insert(h.edges.begin(), {i, i});  // new tadpole first in the edge order
        out += graph_term(h, Rational(p));
    }
    return out;
}

FormalSum<> vkgra_differential(const FormalSum<>& x) {
    return x.apply([](const std::string& k) { return vkgra_differential(parse_graph_key(k)); });
}

FormalSum<> vkgra_sigma(const Graph& g) {
    // expand sigma over each edge; coefficients multiply, edge positions stay
    FormalSum<> out;
    std::vector<std::vector<std::pair<std::pair<int, int>, int>>> options;
    for (const auto& [src, tgt] : g.edges) {
        std::vector<std::pair<std::pair<int, int>, int>> opts;
        if (tgt > 0) {
            opts.push_back({{src, tgt}, 1});
        } else if (-tgt >= 2) {
            opts.push_back({{src, tgt + 1}, 1});
        } else {
            for (int k = 1; k <= g.n2; ++k) opts.push_back({{src, -k}, -1});
            for (int k = 1; k <= g.m; ++k) opts.push_back({{src, k}, -1});
        }
        options.push_back(std::move(opts));
    }
    std::vector<size_t> choice(options.size(), 0);
    for (;;) {
        Graph h = g;
        int coeff = 1;
        for (size_t e = 0; e < options.size(); ++e) {
            h.edges[e] = options[e][choice[e]].first;
            coeff *= options[e][choice[e]].second;
        }
        out += graph_term(h, Rational(coeff));
        size_t k = 0;
        while (k < choice.size() && ++choice[k] == options[k].size()) choice[k++] = 0;
        if (k == choice.size()) break;
    }
    return out;
}

FormalSum<> vkgra_sigma(const FormalSum<>& x) {
    return x.apply([](const std::string& k) { return vkgra_sigma(parse_graph_key(k)); });
}

FormalSum<> vkgra_cyclic_project(const FormalSum<>& x, int n2) {
    FormalSum<> acc = x;
    FormalSum<> cur = x;
    for (int j = 1; j <= n2; ++j) {
        cur = vkgra_sigma(cur);
        acc += cur;
    }
    acc *= Rational(1, n2 + 1);
    return acc;
}

FormalSum<> ambient_delta(const FormalSum<>& a) {
    FormalSum<> out;
    Graph delta = tadpole_graph();
    for (const auto& [k, c] : a.terms()) {
        Graph g = parse_graph_key(k);
        FormalSum<> part = gra_compose(delta, 1, g);
        Rational sign((g.degree() % 2 == 0) ? -1 : 1);  // -(-1)^{|g|}
        for (int i = 1; i <= g.m; ++i) {
            FormalSum<> t = gra_compose(g, static_cast<size_t>(i), delta);
            t *= sign;
            part += t;
        }
        part *= c;
        out += part;
    }
    return out;
}

FormalSum<> gra_delta(const FormalSum<>& a) {
    FormalSum<> out = ambient_delta(a);
    for (const auto& [k, c] : out.terms())
        if (parse_graph_key(k).has_tadpole())
            throw Error(ErrorCode::TadpoleResidue,
                        "gra_delta: tadpole residue " + k + " (coefficient " + c.str() + ")");
    return out;
}

std::vector<std::pair<std::string, int>> enumerate_gra(int n, int max_edges, bool tadpoles) {
    std::vector<std::pair<int, int>> all_edges;
    for (int s = 1; s <= n; ++s)
        for (int t = 1; t <= n; ++t)
            if (tadpoles || s != t) all_edges.emplace_back(s, t);
    std::vector<std::pair<std::string, int>> out;
    std::vector<std::pair<int, int>> cur;
    std::function<void(size_t)> rec = [&](size_t next) {
        Graph g;
        g.m = n;
        g.n2 = 0;
        g.edges = cur;
        g.vpow.assign(static_cast<size_t>(n), 0);
        out.emplace_back(graph_key(g), g.degree());
        if (static_cast<int>(cur.size()) >= max_edges) return;
        for (size_t e = next; e < all_edges.size(); ++e) {
            cur.push_back(all_edges[e]);
            rec(e + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

std::vector<std::pair<std::string, int>> enumerate_vkgra(int m, int n2, int max_edges,
                                                         int max_vtotal) {
    std::vector<std::pair<int, int>> all_edges;
    for (int s = 1; s <= m; ++s) {
        for (int t = 1; t <= m; ++t) all_edges.emplace_back(s, t);
        for (int t = 1; t <= n2; ++t) all_edges.emplace_back(s, -t);
    }
    std::vector<std::pair<std::string, int>> out;
    std::vector<std::pair<int, int>> cur;
    auto vchoices = [&](int total) { return compositions(total, m); };
    std::function<void(size_t)> rec = [&](size_t next) {
        for (int vt = 0; vt <= max_vtotal; ++vt)
            for (const auto& dist : vchoices(vt)) {
                Graph g;
                g.m = m;
                g.n2 = n2;
                g.edges = cur;
                g.vpow = dist;
                if (m == 0) g.vpow.clear(), g.vpow.resize(0);
                out.emplace_back(graph_key(g), g.degree());
            }
        if (static_cast<int>(cur.size()) >= max_edges) return;
        for (size_t e = next; e < all_edges.size(); ++e) {
            cur.push_back(all_edges[e]);
            rec(e + 1);
            cur.pop_back();
        }
    };
    rec(0);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string graph_to_json(const Graph& g, int sign) {
    nlohmann::ordered_json j;
    j["m"] = g.m;
    j["n"] = g.n2;
    auto edges = nlohmann::ordered_json::array();
    for (const auto& [src, tgt] : g.edges) {
        auto e = nlohmann::ordered_json::array();
        e.push_back(src);
        if (tgt > 0) e.push_back(tgt);
        else e.push_back("b" + std::to_string(-tgt));
        edges.push_back(e);
    }
    j["edges"] = edges;
    auto v = nlohmann::ordered_json::object();
    for (int i = 1; i <= g.m; ++i)
        if (g.vpow[static_cast<size_t>(i - 1)])
            v[std::to_string(i)] = g.vpow[static_cast<size_t>(i - 1)];
    j["v"] = v;
    j["sign"] = sign;
    return j.dump();
}

std::pair<Graph, int> graph_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    Graph g;
    g.m = j.at("m").get<int>();
    g.n2 = j.at("n").get<int>();
    g.vpow.assign(static_cast<size_t>(g.m), 0);
    for (const auto& e : j.at("edges")) {
        int src = e.at(0).get<int>();
        int tgt;
        if (e.at(1).is_string()) {
            std::string t = e.at(1).get<std::string>();
            tgt = -std::stoi(t.substr(1));
        } else {
            tgt = e.at(1).get<int>();
        }
        g.edges.emplace_back(src, tgt);
    }
    if (j.contains("v"))
        for (const auto& [key, val] : j.at("v").items())
            g.vpow[static_cast<size_t>(std::stoi(key) - 1)] = val.get<int>();
    int sign = j.value("sign", 1);
    if (!g.valid()) throw Error(ErrorCode::Usage, "graph_from_json: invalid graph");
    return {g, sign};
}

// ---------------- operad wrappers ----------------

GradedBasis GraOperad::basis(size_t arity) const {
    return GradedBasis(enumerate_gra(static_cast<int>(arity), max_edges_, false));
}

int GraOperad::degree(const std::string& key) const { return parse_graph_key(key).degree(); }
size_t GraOperad::arity(const std::string& key) const {
    return static_cast<size_t>(parse_graph_key(key).m);
}

FormalSum<> GraOperad::compose(const std::string& a, size_t i, const std::string& b) const {
    return gra_compose(parse_graph_key(a), i, parse_graph_key(b));
}

FormalSum<> GraOperad::sym(const std::vector<size_t>& perm, const std::string& a) const {
    return graph_sym(perm, parse_graph_key(a));
}

GradedBasis GraTOperad::basis(size_t arity) const {
    return GradedBasis(enumerate_gra(static_cast<int>(arity), max_edges_, true));
}

int GraTOperad::degree(const std::string& key) const { return parse_graph_key(key).degree(); }
size_t GraTOperad::arity(const std::string& key) const {
    return static_cast<size_t>(parse_graph_key(key).m);
}

FormalSum<> GraTOperad::compose(const std::string& a, size_t i, const std::string& b) const {
    return gra_compose(parse_graph_key(a), i, parse_graph_key(b));
}

FormalSum<> GraTOperad::sym(const std::vector<size_t>& perm, const std::string& a) const {
    return graph_sym(perm, parse_graph_key(a));
}

FormalSum<> GraTOperad::delta_element() const { return graph_term(tadpole_graph()); }

Graph mu_graph() {
    Graph g;
    g.m = 2;
    g.n2 = 0;
    g.vpow = {0, 0};
    return g;
}

FormalSum<> b_element() {
    Graph e12 = mu_graph(), e21 = mu_graph();
    e12.edges = {{1, 2}};
    e21.edges = {{2, 1}};
    return graph_term(e12) + graph_term(e21);
}

Graph tadpole_graph() {
    Graph g;
    g.m = 1;
    g.n2 = 0;
    g.edges = {{1, 1}};
    g.vpow = {0};
    return g;
}

}  // namespace ophom
