#include "ophom/poly.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

#include "json.hpp"
#include "ophom/errors.hpp"
#include "ophom/mdo.hpp"

namespace ophom {

namespace {

int popcount_below(uint32_t mask, int l) {
    return __builtin_popcount(mask & ((1u << l) - 1));
}

}  // namespace

Polyvector Polyvector::monomial(int dim, std::vector<int> xexp, std::vector<int> xi_indices,
                                Rational coeff, int upower) {
    Polyvector p(dim, upower);
    Key k;
    k.xexp = std::move(xexp);
    k.xexp.resize(static_cast<size_t>(dim), 0);
    int inv = 0;
    for (size_t i = 0; i < xi_indices.size(); ++i) {
        uint32_t bit = 1u << (xi_indices[i] - 1);
        if (k.ximask & bit) return p;  // repeated xi: zero
        k.ximask |= bit;
        for (size_t j = i + 1; j < xi_indices.size(); ++j)
            if (xi_indices[i] > xi_indices[j]) ++inv;
    }
    p.add_term(k, coeff * Rational(inv % 2 ? -1 : 1));
    return p;
}

Polyvector Polyvector::constant(int dim, Rational c, int upower) {
    Polyvector p(dim, upower);
    Key k;
    k.xexp.assign(static_cast<size_t>(dim), 0);
    p.add_term(k, c);
    return p;
}

void Polyvector::add_term(const Key& k, const Rational& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(k);
    if (it == terms_.end()) terms_.emplace(k, c);
    else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

int Polyvector::xi_degree() const {
    if (terms_.empty()) return 0;
    int d = __builtin_popcount(terms_.begin()->first.ximask);
    for (const auto& [k, c] : terms_)
        if (__builtin_popcount(k.ximask) != d)
            throw Error(ErrorCode::Usage, "xi_degree: inhomogeneous polyvector");
    return d;
}

Polyvector Polyvector::operator-() const {
    Polyvector out(dim_, upow_);
    for (const auto& [k, c] : terms_) out.terms_.emplace(k, -c);
    return out;
}

Polyvector operator+(const Polyvector& a, const Polyvector& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.dim_ != b.dim_ || a.upow_ != b.upow_)
        throw Error(ErrorCode::DimensionMismatch, "polyvector +: dim/upower mismatch");
    Polyvector out = a;
    for (const auto& [k, c] : b.terms_) out.add_term(k, c);
    return out;
}

Polyvector operator-(const Polyvector& a, const Polyvector& b) { return a + (-b); }

Polyvector operator*(const Rational& c, Polyvector a) {
    if (c.is_zero()) return Polyvector(a.dim_, a.upow_);
    for (auto& [k, v] : a.terms_) v *= c;
    return a;
}

bool operator==(const Polyvector& a, const Polyvector& b) {
    if (a.is_zero() && b.is_zero()) return true;
    return a.dim_ == b.dim_ && a.upow_ == b.upow_ && a.terms_ == b.terms_;
}

Polyvector wedge(const Polyvector& a, const Polyvector& b) {
    if (a.is_zero() || b.is_zero()) return Polyvector(a.dim(), a.upower() + b.upower());
    if (a.dim_ != b.dim_) throw Error(ErrorCode::DimensionMismatch, "wedge: dim mismatch");
    Polyvector out(a.dim_, a.upow_ + b.upow_);
    for (const auto& [ka, ca] : a.terms_)
        for (const auto& [kb, cb] : b.terms_) {
            if (ka.ximask & kb.ximask) continue;
            Polyvector::Key k;
            k.xexp.resize(static_cast<size_t>(a.dim_));
            for (int l = 0; l < a.dim_; ++l)
                k.xexp[static_cast<size_t>(l)] =
                    ka.xexp[static_cast<size_t>(l)] + kb.xexp[static_cast<size_t>(l)];
            k.ximask = ka.ximask | kb.ximask;
            // parity of interleaving: count pairs (i in a, j in b) with i > j
            int inv = 0;
            for (int l = 0; l < a.dim_; ++l)
                if (kb.ximask & (1u << l)) inv += __builtin_popcount(ka.ximask >> (l + 1));
            out.add_term(k, ca * cb * Rational(inv % 2 ? -1 : 1));
        }
    return out;
}

Polyvector Polyvector::dx(int l) const {
    Polyvector out(dim_, upow_);
    for (const auto& [k, c] : terms_) {
        int e = k.xexp[static_cast<size_t>(l - 1)];
        if (e == 0) continue;
        Key nk = k;
        nk.xexp[static_cast<size_t>(l - 1)] = e - 1;
        out.add_term(nk, c * Rational(e));
    }
    return out;
}

Polyvector Polyvector::dxi(int l) const {
    Polyvector out(dim_, upow_);
    uint32_t bit = 1u << (l - 1);
    for (const auto& [k, c] : terms_) {
        if (!(k.ximask & bit)) continue;
        Key nk = k;
        nk.ximask &= ~bit;
        int sign = popcount_below(k.ximask, l - 1) % 2 ? -1 : 1;
        out.add_term(nk, c * Rational(sign));
    }
    return out;
}

Polyvector schouten(const Polyvector& x, const Polyvector& y) {
    if (x.is_zero() || y.is_zero()) return Polyvector(std::max(x.dim(), y.dim()),
                                                      x.upower() + y.upower());
    if (x.dim() != y.dim()) throw Error(ErrorCode::DimensionMismatch, "schouten: dim mismatch");
    Polyvector out(x.dim(), x.upower() + y.upower());
    int degx = x.xi_degree();
    Rational sgn(degx % 2 ? -1 : 1);
    for (int l = 1; l <= x.dim(); ++l) {
        Polyvector t1 = wedge(x.dxi(l), y.dx(l));
        t1.set_upower(out.upower());
        Polyvector t2 = wedge(x.dx(l), y.dxi(l));
        t2.set_upower(out.upower());
        out = out + t1 + sgn * t2;
    }
    return out;
}

Polyvector divergence(const Polyvector& x) {
    Polyvector out(x.dim(), x.upower());
    for (int l = 1; l <= x.dim(); ++l) {
        Polyvector t = x.dxi(l).dx(l);
        out = out + t;
    }
    return out;
}

std::string Polyvector::str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [k, c] : terms_) {
        if (!s.empty()) s += " + ";
        s += c.str();
        for (int l = 0; l < dim_; ++l)
            if (k.xexp[static_cast<size_t>(l)])
                s += "*x" + std::to_string(l + 1) + "^" + std::to_string(k.xexp[static_cast<size_t>(l)]);
        for (int l = 0; l < dim_; ++l)
            if (k.ximask & (1u << l)) s += "*xi" + std::to_string(l + 1);
    }
    if (upow_) s += " u^" + std::to_string(upow_);
    return s;
}

std::string Polyvector::to_json() const {
    nlohmann::ordered_json j;
    j["d"] = dim_;
    j["u"] = upow_;
    auto terms = nlohmann::ordered_json::array();
    for (const auto& [k, c] : terms_) {
        nlohmann::ordered_json t;
        t["c"] = c.str();
        t["x"] = k.xexp;
        std::vector<int> xi(static_cast<size_t>(dim_), 0);
        for (int l = 0; l < dim_; ++l)
            if (k.ximask & (1u << l)) xi[static_cast<size_t>(l)] = 1;
        t["xi"] = xi;
        terms.push_back(t);
    }
    j["terms"] = terms;
    return j.dump();
}

Polyvector Polyvector::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    Polyvector p(j.at("d").get<int>(), j.value("u", 0));
    for (const auto& t : j.at("terms")) {
        Key k;
        k.xexp = t.at("x").get<std::vector<int>>();
        auto xi = t.at("xi").get<std::vector<int>>();
        for (size_t l = 0; l < xi.size(); ++l)
            if (xi[l]) k.ximask |= 1u << l;
        p.add_term(k, Rational(t.at("c").get<std::string>()));
    }
    return p;
}

// ---------------- graph actions ----------------

namespace {

// Embeds component c (0-based) of k components into the colored algebra on
// dim * k variables.
Polyvector embed_component(const Polyvector& x, int c, int k) {
    int d = x.dim();
    Polyvector out(d * k, 0);
    for (const auto& [key, coeff] : x.terms()) {
        Polyvector::Key nk;
        nk.xexp.assign(static_cast<size_t>(d * k), 0);
        for (int l = 0; l < d; ++l)
            nk.xexp[static_cast<size_t>(c * d + l)] = key.xexp[static_cast<size_t>(l)];
        nk.ximask = key.ximask << (c * d);
        out.add_term(nk, coeff);
    }
    return out;
}

// After all edge operators act, identify the component variables; remaining
// xi's keep their Koszul order (component-major is already ascending).
Polyvector merge_components(const Polyvector& big, int d, int k) {
    Polyvector out(d, 0);
    for (const auto& [key, coeff] : big.terms()) {
        Polyvector::Key nk;
        nk.xexp.assign(static_cast<size_t>(d), 0);
        for (int c = 0; c < k; ++c)
            for (int l = 0; l < d; ++l)
                nk.xexp[static_cast<size_t>(l)] += key.xexp[static_cast<size_t>(c * d + l)];
        // xi: map big index -> small index, computing the sort parity
        std::vector<int> seq;
        for (int b = 0; b < d * k; ++b)
            if (key.ximask & (1u << b)) seq.push_back(b % d);
        bool dup = false;
        int inv = 0;
        for (size_t i = 0; i < seq.size() && !dup; ++i)
            for (size_t j = i + 1; j < seq.size(); ++j) {
                if (seq[i] == seq[j]) { dup = true; break; }
                if (seq[i] > seq[j]) ++inv;
            }
        if (dup) continue;
        for (int l : seq) nk.ximask |= 1u << l;
        out.add_term(nk, coeff * Rational(inv % 2 ? -1 : 1));
    }
    return out;
}

// One edge operator sum_l d/dx_l^(tgt) d/dxi_l^(src) on the colored algebra.
Polyvector edge_operator(const Polyvector& big, int d, int src_comp, int tgt_comp) {
    Polyvector out(big.dim(), 0);
    for (int l = 1; l <= d; ++l) {
        Polyvector t = big.dxi(src_comp * d + l).dx(tgt_comp * d + l);
        out = out + t;
    }
    return out;
}

}  // namespace

Polyvector gra_act(const Graph& g, const std::vector<Polyvector>& args) {
    if (static_cast<int>(args.size()) != g.m)
        throw Error(ErrorCode::ArityMismatch, "gra_act: argument count");
    if (g.n2 != 0) throw Error(ErrorCode::ArityMismatch, "gra_act: type II vertices present");
    for (const auto& a : args)
        if (a.upower() != 0) throw Error(ErrorCode::Usage, "gra_act: nonzero u power");
    for (int p : g.vpow)
        if (p != 0) throw Error(ErrorCode::Usage, "gra_act: v powers not allowed here");
    int d = args.empty() ? 0 : args[0].dim();
    int k = g.m;
    if (d * k > 31) throw Error(ErrorCode::BoundExceeded, "gra_act: dim * arity too large");
    Polyvector big = Polyvector::constant(d * k, Rational(1));
    for (int c = 0; c < k; ++c) big = wedge(big, embed_component(args[static_cast<size_t>(c)], c, k));
    // the first-listed edge acts outermost, so composites apply inner-graph
    // operators first
    for (auto it = g.edges.rbegin(); it != g.edges.rend(); ++it)
        big = edge_operator(big, d, it->first - 1, it->second - 1);
    return merge_components(big, d, k);
}

Polyvector gra_act(const FormalSum<>& g, const std::vector<Polyvector>& args) {
    Polyvector out;
    bool first = true;
    for (const auto& [k, c] : g.terms()) {
        Polyvector part = c * gra_act(parse_graph_key(k), args);
        out = first ? part : out + part;
        first = false;
    }
    return out;
}

// ---- vKGra action ----

namespace {

// term of the intermediate action state: colored polyvector data + function
// slot multi-indices
struct ActKey {
    std::vector<int> xexp;
    uint32_t ximask = 0;
    std::vector<std::vector<int>> I;
    auto operator<=>(const ActKey&) const = default;
};

using ActState = std::map<ActKey, Rational>;

void act_add(ActState& st, const ActKey& k, const Rational& c) {
    if (c.is_zero()) return;
    auto it = st.find(k);
    if (it == st.end()) st.emplace(k, c);
    else {
        it->second += c;
        if (it->second.is_zero()) st.erase(it);
    }
}

}  // namespace

MultiDiffOp vkgra_act(const Graph& g, const std::vector<Polyvector>& args) {
    if (static_cast<int>(args.size()) != g.m)
        throw Error(ErrorCode::ArityMismatch, "vkgra_act: argument count");
    int d = args.empty() ? 1 : args[0].dim();
    int k = g.m;
    if (d * k > 31) throw Error(ErrorCode::BoundExceeded, "vkgra_act: dim * arity too large");
    // v power at each vertex must match the argument's u power
    for (int i = 0; i < k; ++i)
        if (g.vpow[static_cast<size_t>(i)] != args[static_cast<size_t>(i)].upower())
            return MultiDiffOp(d, g.n2);

    Polyvector big = Polyvector::constant(std::max(d * k, 1), Rational(1));
    for (int c = 0; c < k; ++c) {
        Polyvector a = args[static_cast<size_t>(c)];
        a.set_upower(0);
        big = wedge(big, embed_component(a, c, k));
    }
    ActState state;
    for (const auto& [key, c] : big.terms()) {
        ActKey ak;
        ak.xexp = key.xexp;
        ak.ximask = key.ximask;
        ak.I.assign(static_cast<size_t>(g.n2), {});
        act_add(state, ak, c);
    }
    // the first-listed edge acts outermost
    std::vector<std::pair<int, int>> edge_order(g.edges.rbegin(), g.edges.rend());
    for (const auto& [src, tgt] : edge_order) {
        ActState next;
        for (const auto& [key, c] : state) {
            for (int l = 1; l <= d; ++l) {
                // left xi-derivative on the source component
                int bit = (src - 1) * d + (l - 1);
                if (!(key.ximask & (1u << bit))) continue;
                int sgn = __builtin_popcount(key.ximask & ((1u << bit) - 1)) % 2 ? -1 : 1;
                ActKey mid = key;
                mid.ximask &= ~(1u << bit);
                if (tgt > 0) {
                    // x-derivative on the target component
                    int xi = (tgt - 1) * d + (l - 1);
                    int e = mid.xexp[static_cast<size_t>(xi)];
                    if (e == 0) continue;
                    ActKey nk = mid;
                    nk.xexp[static_cast<size_t>(xi)] = e - 1;
                    act_add(next, nk, c * Rational(sgn * e));
                } else {
                    // derivative slot on the type II vertex
                    ActKey nk = mid;
                    auto& I = nk.I[static_cast<size_t>(-tgt - 1)];
                    I.insert(std::lower_bound(I.begin(), I.end(), l), l);
                    act_add(next, nk, c * Rational(sgn));
                }
            }
        }
        state = std::move(next);
    }
    // project leftover xi's to zero, merge the x components
    MultiDiffOp out(d, g.n2);
    for (const auto& [key, c] : state) {
        if (key.ximask) continue;
        MultiDiffOp::Key mk;
        mk.xexp.assign(static_cast<size_t>(d), 0);
        for (int comp = 0; comp < k; ++comp)
            for (int l = 0; l < d; ++l)
                mk.xexp[static_cast<size_t>(l)] += key.xexp[static_cast<size_t>(comp * d + l)];
        mk.I = key.I;
        out.add_term(mk, c);
    }
    return out;
}

MultiDiffOp vkgra_act(const FormalSum<>& g, const std::vector<Polyvector>& args) {
    MultiDiffOp out;
    bool first = true;
    for (const auto& [k, c] : g.terms()) {
        MultiDiffOp part = c * vkgra_act(parse_graph_key(k), args);
        out = first ? part : out + part;
        first = false;
    }
    return out;
}

Polyvector random_polyvector(Rng& rng, int dim, int max_xdeg, int xi_deg, int n_terms,
                             int upower) {
    Polyvector out(dim, upower);
    for (int t = 0; t < n_terms; ++t) {
        Polyvector::Key k;
        k.xexp.assign(static_cast<size_t>(dim), 0);
        for (int l = 0; l < dim; ++l) k.xexp[static_cast<size_t>(l)] = static_cast<int>(rng.below(static_cast<uint64_t>(max_xdeg + 1)));
        std::vector<int> idx(static_cast<size_t>(dim));
        std::iota(idx.begin(), idx.end(), 0);
        for (size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng.below(i)]);
        if (xi_deg > dim) xi_deg = dim;
        for (int j = 0; j < xi_deg; ++j) k.ximask |= 1u << idx[static_cast<size_t>(j)];
        out.add_term(k, Rational(rng.small_nonzero()));
    }
    return out;
}

}  // namespace ophom
