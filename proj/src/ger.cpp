#include "ophom/ger.hpp"

#include <algorithm>

#include "ophom/errors.hpp"

namespace ophom {

bool SpanBasis::add(const FormalSum<>& v) {
    FormalSum<> red = v;
    std::vector<Rational> acc(adopted_.size(), Rational(0));
    for (size_t r = 0; r < echelon_.size(); ++r) {
        Rational c = red.coeff(pivot_[r]);
        if (c.is_zero()) continue;
        FormalSum<> sub = echelon_[r];
        sub *= c;
        red -= sub;
        for (size_t j = 0; j < combo_[r].size(); ++j) acc[j] += c * combo_[r][j];
    }
    if (red.is_zero()) return false;
    // new echelon row: (v - sum) normalized to pivot coefficient 1
    const std::string& pk = red.terms().begin()->first;
    Rational lead = red.coeff(pk);
    FormalSum<> row = red;
    row *= lead.inv();
    std::vector<Rational> combo(adopted_.size() + 1, Rational(0));
    for (size_t j = 0; j < acc.size(); ++j) combo[j] = -acc[j] / lead;
    combo[adopted_.size()] = lead.inv();
    adopted_.push_back(v);
    echelon_.push_back(std::move(row));
    pivot_.push_back(pk);
    combo_.push_back(std::move(combo));
    return true;
}

std::optional<std::vector<Rational>> SpanBasis::coords(const FormalSum<>& v) const {
    FormalSum<> red = v;
    std::vector<Rational> acc(adopted_.size(), Rational(0));
    for (size_t r = 0; r < echelon_.size(); ++r) {
        Rational c = red.coeff(pivot_[r]);
        if (c.is_zero()) continue;
        FormalSum<> sub = echelon_[r];
        sub *= c;
        red -= sub;
        for (size_t j = 0; j < combo_[r].size(); ++j) acc[j] += c * combo_[r][j];
    }
    if (!red.is_zero()) return std::nullopt;
    return acc;
}

GerOperad::GerOperad(size_t max_arity) : max_arity_(max_arity) {
    if (max_arity < 2) throw Error(ErrorCode::Usage, "GerOperad: max_arity >= 2 required");
    Level l2;
    l2.span.add(graph_term(mu_graph()));
    l2.degrees.push_back(0);
    l2.span.add(b_element());
    l2.degrees.push_back(-1);
    levels_[2] = std::move(l2);
    for (size_t n = 3; n <= max_arity; ++n) {
        const Level& prev = levels_.at(n - 1);
        Level cur;
        std::vector<FormalSum<>> gens = {graph_term(mu_graph()), b_element()};
        std::vector<int> gen_deg = {0, -1};
        for (size_t x = 0; x < prev.span.size(); ++x)
            for (size_t i = 1; i <= n - 1; ++i)
                for (size_t gi = 0; gi < gens.size(); ++gi) {
                    FormalSum<> cand = gra_compose(prev.span.vec(x), i, gens[gi]);
                    if (cand.is_zero()) continue;
                    if (cur.span.add(cand))
                        cur.degrees.push_back(prev.degrees[x] + gen_deg[gi]);
                }
        // close under the symmetric action: insertions only produce elements
        // whose new pair of slots is consecutive
        for (size_t x = 0; x < cur.span.size(); ++x)
            for (size_t t = 1; t + 1 <= n; ++t) {
                std::vector<size_t> tau = identity_perm(n);
                std::swap(tau[t - 1], tau[t]);
                FormalSum<> img = cur.span.vec(x).apply(
                    [&](const std::string& k) { return graph_sym(tau, parse_graph_key(k)); });
                if (cur.span.add(img)) cur.degrees.push_back(cur.degrees[x]);
            }
        levels_[n] = std::move(cur);
    }
}

std::string GerOperad::key_of(size_t arity, size_t index) const {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "g%zu:%03zu", arity, index);
    return buf;
}

GradedBasis GerOperad::basis(size_t ar) const {
    std::vector<std::pair<std::string, int>> out;
    auto it = levels_.find(ar);
    if (it != levels_.end())
        for (size_t i = 0; i < it->second.span.size(); ++i)
            out.emplace_back(key_of(ar, i), it->second.degrees[i]);
    return GradedBasis(std::move(out));
}

namespace {
std::pair<size_t, size_t> split_ger_key(const std::string& key) {
    if (key.empty() || key[0] != 'g') throw Error(ErrorCode::Usage, "bad Ger key: " + key);
    size_t colon = key.find(':');
    return {std::stoul(key.substr(1, colon - 1)), std::stoul(key.substr(colon + 1))};
}
}  // namespace

int GerOperad::degree(const std::string& key) const {
    auto [n, i] = split_ger_key(key);
    return levels_.at(n).degrees.at(i);
}

size_t GerOperad::arity(const std::string& key) const { return split_ger_key(key).first; }

const FormalSum<>& GerOperad::realize(const std::string& key) const {
    auto [n, i] = split_ger_key(key);
    return levels_.at(n).span.vec(i);
}

FormalSum<> GerOperad::realize(const FormalSum<>& x) const {
    FormalSum<> out;
    for (const auto& [k, c] : x.terms()) {
        FormalSum<> part = realize(k);
        part *= c;
        out += part;
    }
    return out;
}

FormalSum<> GerOperad::from_gra(const FormalSum<>& v, size_t ar) const {
    auto it = levels_.find(ar);
    if (it == levels_.end()) throw Error(ErrorCode::BoundExceeded, "Ger: arity beyond bound");
    auto coords = it->second.span.coords(v);
    if (!coords)
        throw Error(ErrorCode::Usage, "from_gra: element not in the Ger subspace");
    FormalSum<> out;
    for (size_t i = 0; i < coords->size(); ++i) out.add(key_of(ar, i), (*coords)[i]);
    return out;
}

FormalSum<> GerOperad::compose(const std::string& a, size_t i, const std::string& b) const {
    size_t na = arity(a), nb = arity(b);
    return from_gra(gra_compose(realize(a), i, realize(b)), na + nb - 1);
}

FormalSum<> GerOperad::sym(const std::vector<size_t>& perm, const std::string& a) const {
    size_t n = arity(a);
    FormalSum<> v = realize(a).apply(
        [&](const std::string& k) { return graph_sym(perm, parse_graph_key(k)); });
    return from_gra(v, n);
}

FormalSum<> GerOperad::mixed_delta(const std::string& a) const {
    return from_gra(gra_delta(realize(a)), arity(a));
}

SparseMatrix GerOperad::r_matrix(size_t ar) const {
    const Level& lvl = levels_.at(ar);
    size_t n = lvl.span.size();
    return SparseMatrix::from_columns(n, n, [&](size_t j) {
        FormalSum<> img = gra_delta(lvl.span.vec(j));
        auto coords = lvl.span.coords(img);
        if (!coords)
            throw Error(ErrorCode::Usage, "R does not preserve the Ger subspace");
        std::vector<std::pair<size_t, Rational>> col;
        for (size_t r = 0; r < coords->size(); ++r)
            if (!(*coords)[r].is_zero()) col.emplace_back(r, (*coords)[r]);
        return col;
    });
}

}  // namespace ophom
