#include "ophom/operad.hpp"

#include <algorithm>
#include <cassert>

#include "json.hpp"
#include "ophom/errors.hpp"

namespace ophom {

FormalSum<> DgOperad::mixed_delta(const std::string&) const {
    throw Error(ErrorCode::NotMixed, name() + ": no mixed complex structure");
}

FormalSum<> DgOperad::delta_element() const {
    throw Error(ErrorCode::MissingDelta, name() + ": no S^1 structure");
}

FormalSum<> DgOperad::compose(const FormalSum<>& a, size_t i, const FormalSum<>& b) const {
    FormalSum<> out;
    for (const auto& [ka, ca] : a.terms())
        for (const auto& [kb, cb] : b.terms()) {
            FormalSum<> part = compose(ka, i, kb);
            part *= ca * cb;
            out += part;
        }
    return out;
}

FormalSum<> DgOperad::sym(const std::vector<size_t>& perm, const FormalSum<>& a) const {
    return a.apply([&](const std::string& k) { return sym(perm, k); });
}

FormalSum<> DgOperad::differential(const FormalSum<>& a) const {
    return a.apply([&](const std::string& k) { return differential(k); });
}

FormalSum<> DgOperad::mixed_delta(const FormalSum<>& a) const {
    return a.apply([&](const std::string& k) { return mixed_delta(k); });
}

FormalSum<> DgOperad::rho(const FormalSum<>& a) const {
    return a.apply([&](const std::string& k) { return rho(k); });
}

int DgOperad::degree_of(const FormalSum<>& a) const {
    if (a.is_zero()) throw Error(ErrorCode::Usage, "degree_of: zero element");
    int d = degree(a.terms().begin()->first);
    for (const auto& [k, c] : a.terms())
        if (degree(k) != d) throw Error(ErrorCode::Usage, "degree_of: inhomogeneous element");
    return d;
}

size_t DgOperad::arity_of(const FormalSum<>& a) const {
    if (a.is_zero()) throw Error(ErrorCode::Usage, "arity_of: zero element");
    size_t n = arity(a.terms().begin()->first);
    for (const auto& [k, c] : a.terms())
        if (arity(k) != n) throw Error(ErrorCode::Usage, "arity_of: mixed arity element");
    return n;
}

FormalSum<> external_delta(const DgOperad& op, const FormalSum<>& a) {
    if (!op.has_delta_element())
        throw Error(ErrorCode::MissingDelta, op.name() + ": external_delta needs delta");
    if (a.is_zero()) return {};
    FormalSum<> delta = op.delta_element();
    int d = op.degree_of(a);
    size_t n = op.arity_of(a);
    FormalSum<> out = op.compose(delta, 1, a);
    Rational sign((d % 2 == 0) ? -1 : 1);  // -(-1)^d
    for (size_t i = 1; i <= n; ++i) {
        FormalSum<> t = op.compose(a, i, delta);
        t *= sign;
        out += t;
    }
    return out;
}

// ---------------- theta ----------------

ThetaOperad::ThetaOperad(const DgOperad& base) : base_(base) {
    if (!base.has_rho())
        throw Error(ErrorCode::NotRotational, base.name() + ": theta needs a rotational operator");
}

GradedBasis ThetaOperad::basis(size_t arity) const {
    GradedBasis b = base_.basis(arity);
    std::vector<std::pair<std::string, int>> shifted;
    for (size_t i = 0; i < b.size(); ++i) shifted.emplace_back(b.label(i), b.degree(i) - 1);
    return GradedBasis(std::move(shifted));
}

FormalSum<> ThetaOperad::compose(const std::string& a, size_t i, const std::string& b) const {
    FormalSum<> rb = base_.rho(b);
    FormalSum<> out;
    for (const auto& [k, c] : rb.terms()) {
        FormalSum<> part = base_.compose(a, i, k);
        part *= c;
        out += part;
    }
    return out;
}

// ---------------- cyclic chains ----------------

namespace {
const char kPowerSep = '~';
}

CcOperad::CcOperad(const DgOperad& base, CcKind kind, unsigned trunc)
    : base_(base), kind_(kind), trunc_(trunc) {
    if (trunc < 1) throw Error(ErrorCode::Usage, "CcOperad: trunc must be >= 1");
    if (kind == CcKind::Theta) {
        if (!base.has_rho())
            throw Error(ErrorCode::NotRotational, base.name() + ": CC^theta needs rho");
    } else if (!base.has_mixed_delta()) {
        throw Error(ErrorCode::NotMixed, base.name() + ": CC variants need a mixed structure");
    }
}

std::string CcOperad::name() const {
    switch (kind_) {
        case CcKind::Minus: return "CC^-(" + base_.name() + ")";
        case CcKind::Plain: return "CC(" + base_.name() + ")";
        case CcKind::Theta: return "CC^theta(" + base_.name() + ")";
    }
    return {};
}

std::string CcOperad::make_key(const std::string& base_key, unsigned power) const {
    char tag = (kind_ == CcKind::Minus) ? 'u' : 'v';
    return base_key + kPowerSep + tag + std::to_string(power);
}

std::pair<std::string, unsigned> CcOperad::split_key(const std::string& key) const {
    size_t pos = key.rfind(kPowerSep);
    if (pos == std::string::npos)
        throw Error(ErrorCode::Usage, "CcOperad: malformed key " + key);
    unsigned power = static_cast<unsigned>(std::stoul(key.substr(pos + 2)));
    return {key.substr(0, pos), power};
}

GradedBasis CcOperad::basis(size_t arity) const {
    GradedBasis b = base_.basis(arity);
    std::vector<std::pair<std::string, int>> out;
    for (unsigned r = 0; r <= trunc_; ++r)
        for (size_t i = 0; i < b.size(); ++i) {
            int deg = b.degree(i);
            int shifted = (kind_ == CcKind::Minus)   ? deg + 2 * static_cast<int>(r)
                          : (kind_ == CcKind::Plain) ? deg - 2 * static_cast<int>(r)
                                                     : deg - 1 - 2 * static_cast<int>(r);
            out.emplace_back(make_key(b.label(i), r), shifted);
        }
    return GradedBasis(std::move(out));
}

int CcOperad::degree(const std::string& key) const {
    auto [bk, r] = split_key(key);
    int deg = base_.degree(bk);
    switch (kind_) {
        case CcKind::Minus: return deg + 2 * static_cast<int>(r);
        case CcKind::Plain: return deg - 2 * static_cast<int>(r);
        case CcKind::Theta: return deg - 1 - 2 * static_cast<int>(r);
    }
    return 0;
}

size_t CcOperad::arity(const std::string& key) const { return base_.arity(split_key(key).first); }

FormalSum<> CcOperad::inject(const FormalSum<>& base_elem, unsigned power) const {
    FormalSum<> out;
    if (power > trunc_) return out;
    for (const auto& [k, c] : base_elem.terms()) out.add(make_key(k, power), c);
    return out;
}

FormalSum<> CcOperad::compose(const std::string& a, size_t i, const std::string& b) const {
    auto [ka, r] = split_key(a);
    auto [kb, s] = split_key(b);
    if (r + s > trunc_) return {};  // truncation drops overflowing powers
    FormalSum<> base_result;
    if (kind_ == CcKind::Theta) {
        FormalSum<> rb = base_.rho(kb);
        for (const auto& [k, c] : rb.terms()) {
            FormalSum<> part = base_.compose(ka, i, k);
            part *= c;
            base_result += part;
        }
    } else {
        base_result = base_.compose(ka, i, kb);
    }
    return inject(base_result, r + s);
}

FormalSum<> CcOperad::sym(const std::vector<size_t>& perm, const std::string& a) const {
    auto [ka, r] = split_key(a);
    return inject(base_.sym(perm, ka), r);
}

FormalSum<> CcOperad::differential(const std::string& a) const {
    auto [ka, r] = split_key(a);
    FormalSum<> out;
    switch (kind_) {
        case CcKind::Minus:
            out += inject(base_.differential(ka), r);
            if (r + 1 <= trunc_) out += inject(base_.mixed_delta(ka), r + 1);
            break;
        case CcKind::Plain:
            out += inject(base_.differential(ka), r);
            if (r >= 1) out += inject(base_.mixed_delta(ka), r - 1);
            break;
        case CcKind::Theta:
            out += inject(-base_.differential(ka), r);
            if (r >= 1) out += inject(base_.rho(ka), r - 1);
            break;
    }
    return out;
}

FormalSum<> CcOperad::mixed_delta(const std::string& a) const {
    auto [ka, r] = split_key(a);
    return inject(kind_ == CcKind::Theta ? base_.rho(ka) : base_.mixed_delta(ka), r);
}

FormalSum<> CcOperad::to_ker_delta(const FormalSum<>& a) const {
    if (kind_ != CcKind::Theta) throw Error(ErrorCode::Usage, "to_ker_delta: CC^theta only");
    FormalSum<> out;
    for (const auto& [k, c] : a.terms()) {
        auto [bk, r] = split_key(k);
        if (r == 0) {
            FormalSum<> part = base_.rho(bk);
            part *= c;
            out += part;
        }
    }
    return out;
}

FormalSum<> CcOperad::from_ker_delta(const FormalSum<>& x) const {
    if (kind_ != CcKind::Minus) throw Error(ErrorCode::Usage, "from_ker_delta: CC^- only");
    if (!x.is_zero() && !base_.mixed_delta(x).is_zero())
        throw Error(ErrorCode::Usage, "from_ker_delta: element not in ker(Delta)");
    return inject(x, 0);
}

std::map<int, size_t> CcOperad::homology_dims(size_t n) const {
    GradedComplex cx(basis(n), [this](const std::string& k) { return differential(k); });
    return cx.homology_dims();
}

// ---------------- verification sweeps ----------------

std::string CheckReport::to_json() const {
    nlohmann::ordered_json j;
    j["name"] = name;
    j["pass"] = pass;
    j["checks"] = checks;
    j["failures"] = failures;
    return j.dump();
}

std::vector<size_t> identity_perm(size_t n) {
    std::vector<size_t> p(n);
    for (size_t i = 0; i < n; ++i) p[i] = i + 1;
    return p;
}

std::vector<size_t> blowup_perm(const std::vector<size_t>& sigma, size_t i, size_t q) {
    size_t p = sigma.size();
    std::vector<size_t> out(p + q - 1);
    auto shift = [&](size_t s) { return s > sigma[i - 1] ? s + q - 1 : s; };
    for (size_t j = 1; j <= p; ++j) {
        if (j < i) out[j - 1] = shift(sigma[j - 1]);
        else if (j > i) out[j + q - 2] = shift(sigma[j - 1]);
    }
    for (size_t t = 1; t <= q; ++t) out[i + t - 2] = sigma[i - 1] + t - 1;
    return out;
}

namespace {

struct BasisCache {
    std::vector<GradedBasis> by_arity;  // index = arity
    explicit BasisCache(const DgOperad& op, size_t max_arity) {
        by_arity.resize(max_arity + 1);
        for (size_t n = 1; n <= max_arity; ++n) by_arity[n] = op.basis(n);
    }
    const std::string& pick(Rng& rng, size_t n) const {
        const GradedBasis& b = by_arity[n];
        return b.label(rng.below(b.size()));
    }
    bool empty(size_t n) const { return by_arity[n].size() == 0; }
};

}  // namespace

CheckReport check_operad_axioms(const DgOperad& op, size_t max_arity, size_t samples,
                                uint64_t seed) {
    CheckReport rep;
    rep.name = "operad-axioms:" + op.name();
    Rng rng(seed);
    BasisCache cache(op, max_arity);

    auto run_triple = [&](const std::string& a, const std::string& b, const std::string& c) {
        size_t p = op.arity(a), q = op.arity(b);
        int db = op.degree(b), dc = op.degree(c);
        size_t i = 1 + rng.below(p);
        // sequential shape
        {
            size_t j = i + rng.below(q);
            FormalSum<> lhs = op.compose(op.compose(FormalSum<>::basis(a), i, FormalSum<>::basis(b)),
                                         j, FormalSum<>::basis(c));
            FormalSum<> rhs = op.compose(FormalSum<>::basis(a), i,
                                         op.compose(FormalSum<>::basis(b), j - i + 1,
                                                    FormalSum<>::basis(c)));
            rep.note(lhs == rhs, "sequential: (" + a + " o_" + std::to_string(i) + " " + b +
                                     ") o_" + std::to_string(j) + " " + c);
        }
        // parallel shape (needs a second slot)
        if (p >= 2) {
            size_t j = 1 + rng.below(p);
            while (j == i) j = 1 + rng.below(p);
            size_t lo = std::min(i, j), hi = std::max(i, j);
            // insert b at lo, then c at the shifted copy of hi
            FormalSum<> lhs = op.compose(op.compose(FormalSum<>::basis(a), lo, FormalSum<>::basis(b)),
                                         hi + q - 1, FormalSum<>::basis(c));
            FormalSum<> rhs = op.compose(op.compose(FormalSum<>::basis(a), hi, FormalSum<>::basis(c)),
                                         lo, FormalSum<>::basis(b));
            if ((db * dc) % 2) rhs *= Rational(-1);
            rep.note(lhs == rhs, "parallel: " + a + " with " + b + "@" + std::to_string(lo) + ", " +
                                     c + "@" + std::to_string(hi));
        }
    };

    auto run_equivariance = [&](const std::string& a, const std::string& b) {
        size_t p = op.arity(a), q = op.arity(b);
        std::vector<size_t> sigma = identity_perm(p);
        for (size_t k = p; k > 1; --k) std::swap(sigma[k - 1], sigma[rng.below(k)]);
        size_t i = 1 + rng.below(p);
        FormalSum<> lhs = op.compose(op.sym(sigma, FormalSum<>::basis(a)), sigma[i - 1],
                                     FormalSum<>::basis(b));
        FormalSum<> rhs = op.sym(blowup_perm(sigma, i, q), op.compose(FormalSum<>::basis(a), i,
                                                                      FormalSum<>::basis(b)));
        rep.note(lhs == rhs, "equivariance: " + a + " o " + b);
    };

    std::vector<std::array<size_t, 3>> shapes;
    for (size_t p = 1; p <= max_arity; ++p)
        for (size_t q = 1; q <= max_arity; ++q)
            for (size_t r = 1; r <= max_arity; ++r)
                if (p + q - 1 <= op.max_arity() && p + q + r - 2 <= op.max_arity() &&
                    !cache.empty(p) && !cache.empty(q) && !cache.empty(r))
                    shapes.push_back({p, q, r});
    if (shapes.empty()) return rep;

    size_t exhaustive_budget = samples;
    size_t total = 0;
    for (auto [p, q, r] : shapes)
        total += cache.by_arity[p].size() * cache.by_arity[q].size() * cache.by_arity[r].size();

    if (total <= exhaustive_budget) {
        for (auto [p, q, r] : shapes)
            for (size_t ia = 0; ia < cache.by_arity[p].size(); ++ia)
                for (size_t ib = 0; ib < cache.by_arity[q].size(); ++ib)
                    for (size_t ic = 0; ic < cache.by_arity[r].size(); ++ic) {
                        run_triple(cache.by_arity[p].label(ia), cache.by_arity[q].label(ib),
                                   cache.by_arity[r].label(ic));
                        run_equivariance(cache.by_arity[p].label(ia), cache.by_arity[q].label(ib));
                    }
    } else {
        for (size_t s = 0; s < samples; ++s) {
            auto [p, q, r] = shapes[rng.below(shapes.size())];
            const std::string& a = cache.pick(rng, p);
            const std::string& b = cache.pick(rng, q);
            const std::string& c = cache.pick(rng, r);
            run_triple(a, b, c);
            run_equivariance(a, b);
        }
    }
    return rep;
}

CheckReport check_rotational(const DgOperad& op, size_t max_arity, size_t samples, uint64_t seed) {
    CheckReport rep;
    rep.name = "rotational:" + op.name();
    if (!op.has_rho()) {
        rep.note(false, "operad has no rho");
        return rep;
    }
    Rng rng(seed);
    BasisCache cache(op, max_arity);
    for (size_t n = 1; n <= max_arity; ++n) {
        const GradedBasis& b = cache.by_arity[n];
        for (size_t i = 0; i < b.size(); ++i) {
            FormalSum<> x = FormalSum<>::basis(b.label(i));
            rep.note(op.rho(op.rho(x)).is_zero(), "rho^2 != 0 on " + b.label(i));
            FormalSum<> anti = op.differential(op.rho(x)) + op.rho(op.differential(x));
            rep.note(anti.is_zero(), "d rho + rho d != 0 on " + b.label(i));
        }
    }
    size_t done = 0;
    std::vector<size_t> arities;
    for (size_t n = 1; n <= max_arity; ++n)
        if (!cache.empty(n)) arities.push_back(n);
    while (done < samples && !arities.empty()) {
        size_t p = arities[rng.below(arities.size())];
        size_t q = arities[rng.below(arities.size())];
        if (p + q - 1 > op.max_arity()) { ++done; continue; }
        const std::string& a = cache.pick(rng, p);
        const std::string& b = cache.pick(rng, q);
        size_t i = 1 + rng.below(p);
        FormalSum<> fa = FormalSum<>::basis(a), fb = FormalSum<>::basis(b);
        FormalSum<> lhs = op.rho(op.compose(fa, i, op.rho(fb)));
        FormalSum<> rhs = op.compose(op.rho(fa), i, op.rho(fb));
        rep.note(lhs == rhs, "rotational law on " + a + " o_" + std::to_string(i) + " " + b);
        ++done;
    }
    return rep;
}

CheckReport check_dg_structure(const DgOperad& op, size_t max_arity, size_t samples,
                               uint64_t seed) {
    CheckReport rep;
    rep.name = "dg-structure:" + op.name();
    Rng rng(seed);
    BasisCache cache(op, max_arity);
    for (size_t n = 1; n <= max_arity; ++n) {
        const GradedBasis& b = cache.by_arity[n];
        for (size_t i = 0; i < b.size(); ++i) {
            FormalSum<> x = FormalSum<>::basis(b.label(i));
            FormalSum<> dx = op.differential(x);
            if (!dx.is_zero())
                rep.note(op.degree_of(dx) == op.degree(b.label(i)) + 1,
                         "d degree != +1 on " + b.label(i));
            rep.note(op.differential(dx).is_zero(), "d^2 != 0 on " + b.label(i));
            if (op.has_mixed_delta()) {
                FormalSum<> Dx = op.mixed_delta(x);
                if (!Dx.is_zero())
                    rep.note(op.degree_of(Dx) == op.degree(b.label(i)) - 1,
                             "Delta degree != -1 on " + b.label(i));
                rep.note(op.mixed_delta(Dx).is_zero(), "Delta^2 != 0 on " + b.label(i));
                FormalSum<> anti = op.differential(Dx) + op.mixed_delta(dx);
                rep.note(anti.is_zero(), "d Delta + Delta d != 0 on " + b.label(i));
            }
        }
    }
    // derivation rules on sampled pairs
    std::vector<size_t> arities;
    for (size_t n = 1; n <= max_arity; ++n)
        if (!cache.empty(n)) arities.push_back(n);
    for (size_t s = 0; s < samples && !arities.empty(); ++s) {
        size_t p = arities[rng.below(arities.size())];
        size_t q = arities[rng.below(arities.size())];
        if (p + q - 1 > op.max_arity()) continue;
        const std::string& a = cache.pick(rng, p);
        const std::string& b = cache.pick(rng, q);
        size_t i = 1 + rng.below(p);
        FormalSum<> fa = FormalSum<>::basis(a), fb = FormalSum<>::basis(b);
        Rational koszul(op.degree(a) % 2 ? -1 : 1);
        {
            FormalSum<> lhs = op.differential(op.compose(fa, i, fb));
            FormalSum<> rhs = op.compose(op.differential(fa), i, fb);
            FormalSum<> t = op.compose(fa, i, op.differential(fb));
            t *= koszul;
            rhs += t;
            rep.note(lhs == rhs, "d not a derivation on " + a + " o_" + std::to_string(i) + " " + b);
        }
        if (op.has_mixed_delta()) {
            FormalSum<> lhs = op.mixed_delta(op.compose(fa, i, fb));
            FormalSum<> rhs = op.compose(op.mixed_delta(fa), i, fb);
            FormalSum<> t = op.compose(fa, i, op.mixed_delta(fb));
            t *= koszul;
            rhs += t;
            rep.note(lhs == rhs,
                     "Delta not a derivation on " + a + " o_" + std::to_string(i) + " " + b);
        }
    }
    return rep;
}

CheckReport w_identities_check(const DgOperad& source, const DgOperad& target,
                               const std::function<FormalSum<>(const std::string&)>& phi,
                               size_t max_arity, size_t samples, uint64_t seed) {
    CheckReport rep;
    rep.name = "w-identities:" + source.name() + "->" + target.name();
    if (!target.has_delta_element()) {
        rep.note(false, "target has no delta element");
        return rep;
    }
    Rng rng(seed);
    BasisCache cache(source, max_arity);
    auto phi_sum = [&](const FormalSum<>& x) { return x.apply(phi); };
    for (size_t n = 1; n <= max_arity; ++n) {
        const GradedBasis& b = cache.by_arity[n];
        for (size_t i = 0; i < b.size(); ++i) {
            const std::string& a = b.label(i);
            FormalSum<> fa = FormalSum<>::basis(a);
            rep.note(phi_sum(source.differential(fa)) == target.differential(phi_sum(fa)),
                     "phi does not respect d on " + a);
            if (source.has_mixed_delta()) {
                // phi(R(a)) = {delta_target, phi(a)}: the W(O) identity
                FormalSum<> lhs = phi_sum(source.mixed_delta(fa));
                FormalSum<> pa = phi_sum(fa);
                FormalSum<> rhs = pa.is_zero() ? FormalSum<>() : external_delta(target, pa);
                rep.note(lhs == rhs, "phi(R a) != {delta, phi a} on " + a);
            }
        }
    }
    std::vector<size_t> arities;
    for (size_t n = 1; n <= max_arity; ++n)
        if (!cache.empty(n)) arities.push_back(n);
    for (size_t s = 0; s < samples && !arities.empty(); ++s) {
        size_t p = arities[rng.below(arities.size())];
        size_t q = arities[rng.below(arities.size())];
        if (p + q - 1 > source.max_arity()) continue;
        const std::string& a = cache.pick(rng, p);
        const std::string& b = cache.pick(rng, q);
        size_t i = 1 + rng.below(p);
        FormalSum<> fa = FormalSum<>::basis(a), fb = FormalSum<>::basis(b);
        rep.note(phi_sum(source.compose(fa, i, fb)) ==
                     target.compose(phi_sum(fa), i, phi_sum(fb)),
                 "phi not multiplicative on " + a + " o_" + std::to_string(i) + " " + b);
    }
    return rep;
}

}  // namespace ophom
