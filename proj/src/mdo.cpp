#include "ophom/mdo.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

#include "json.hpp"
#include "ophom/errors.hpp"

namespace ophom {

namespace {
// Slot rotation direction for the cyclic action: the content of slot j moves
// to slot j+1 (mod n+1).  Pinned by sigma^{n+1} = id together with the
// graph-equivariance tests.
constexpr int kSigmaShift = 1;
}  // namespace

MultiDiffOp MultiDiffOp::mu(int dim) {
    MultiDiffOp m(dim, 2);
    Key k;
    k.xexp.assign(static_cast<size_t>(dim), 0);
    k.I = {{}, {}};
    m.add_term(k, Rational(1));
    return m;
}

void MultiDiffOp::add_term(const Key& k, const Rational& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(k);
    if (it == terms_.end()) terms_.emplace(k, c);
    else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

MultiDiffOp MultiDiffOp::operator-() const {
    MultiDiffOp out(dim_, arity_);
    for (const auto& [k, c] : terms_) out.terms_.emplace(k, -c);
    return out;
}

MultiDiffOp operator+(const MultiDiffOp& a, const MultiDiffOp& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.dim_ != b.dim_ || a.arity_ != b.arity_)
        throw Error(ErrorCode::DimensionMismatch, "mdo +: dim/arity mismatch");
    MultiDiffOp out = a;
    for (const auto& [k, c] : b.terms_) out.add_term(k, c);
    return out;
}

MultiDiffOp operator-(const MultiDiffOp& a, const MultiDiffOp& b) { return a + (-b); }

MultiDiffOp operator*(const Rational& c, MultiDiffOp a) {
    if (c.is_zero()) return MultiDiffOp(a.dim_, a.arity_);
    for (auto& [k, v] : a.terms_) v *= c;
    return a;
}

bool operator==(const MultiDiffOp& a, const MultiDiffOp& b) {
    if (a.is_zero() && b.is_zero()) return true;
    return a.dim_ == b.dim_ && a.arity_ == b.arity_ && a.terms_ == b.terms_;
}

bool MultiDiffOp::vanishes_on_constants() const {
    for (int j = 0; j < arity_; ++j) {
        std::map<Key, Rational> contracted;
        for (const auto& [k, c] : terms_) {
            if (!k.I[static_cast<size_t>(j)].empty()) continue;
            Key nk;
            nk.xexp = k.xexp;
            for (int t = 0; t < arity_; ++t)
                if (t != j) nk.I.push_back(k.I[static_cast<size_t>(t)]);
            auto it = contracted.find(nk);
            if (it == contracted.end()) contracted.emplace(nk, c);
            else {
                it->second += c;
                if (it->second.is_zero()) contracted.erase(it);
            }
        }
        if (!contracted.empty()) return false;
    }
    return true;
}

// ---------------- composition ----------------

namespace {

void insert_sorted(std::vector<int>& v, int l) {
    v.insert(std::lower_bound(v.begin(), v.end(), l), l);
}

// Distributes the derivative multiset I over the coefficient monomial `qexp`
// and the slots listed in `J` (Leibniz, one index at a time).
void distribute(const std::vector<int>& I, size_t idx, std::vector<int> qexp, Rational coeff,
                std::vector<std::vector<int>>& J,
                const std::function<void(const std::vector<int>&, const Rational&,
                                         const std::vector<std::vector<int>>&)>& emit) {
    if (idx == I.size()) {
        emit(qexp, coeff, J);
        return;
    }
    int l = I[idx];
    int e = qexp[static_cast<size_t>(l - 1)];
    if (e > 0) {
        qexp[static_cast<size_t>(l - 1)] = e - 1;
        distribute(I, idx + 1, qexp, coeff * Rational(e), J, emit);
        qexp[static_cast<size_t>(l - 1)] = e;
    }
    for (auto& slot : J) {
        insert_sorted(slot, l);
        distribute(I, idx + 1, qexp, coeff, J, emit);
        slot.erase(std::lower_bound(slot.begin(), slot.end(), l));
    }
}

}  // namespace

MultiDiffOp gerst_compose(const MultiDiffOp& d, size_t i, const MultiDiffOp& dp) {
    if (d.is_zero() || dp.is_zero()) return MultiDiffOp(std::max(d.dim(), dp.dim()),
                                                        d.arity() + dp.arity() - 1);
    if (d.dim() != dp.dim()) throw Error(ErrorCode::DimensionMismatch, "gerst_compose: dim");
    int n = d.arity(), m = dp.arity();
    if (i < 1 || static_cast<int>(i) > n)
        throw Error(ErrorCode::ArityMismatch, "gerst_compose: slot out of range");
    MultiDiffOp out(d.dim(), n + m - 1);
    for (const auto& [kd, cd] : d.terms()) {
        const auto& Ii = kd.I[i - 1];
        for (const auto& [kp, cp] : dp.terms()) {
            std::vector<std::vector<int>> J = kp.I;
            distribute(Ii, 0, kp.xexp, cd * cp, J,
                       [&](const std::vector<int>& qexp, const Rational& coeff,
                           const std::vector<std::vector<int>>& Jres) {
                           MultiDiffOp::Key nk;
                           nk.xexp.resize(kd.xexp.size());
                           for (size_t l = 0; l < nk.xexp.size(); ++l)
                               nk.xexp[l] = kd.xexp[l] + qexp[l];
                           nk.I.reserve(static_cast<size_t>(n + m - 1));
                           for (size_t t = 0; t + 1 < i; ++t) nk.I.push_back(kd.I[t]);
                           for (const auto& s : Jres) nk.I.push_back(s);
                           for (size_t t = i; t < static_cast<size_t>(n); ++t)
                               nk.I.push_back(kd.I[t]);
                           out.add_term(nk, coeff);
                       });
        }
    }
    return out;
}

MultiDiffOp gerst_total(const MultiDiffOp& d, const MultiDiffOp& dp) {
    MultiDiffOp out(d.dim(), d.arity() + dp.arity() - 1);
    for (int i = 1; i <= d.arity(); ++i) {
        MultiDiffOp t = gerst_compose(d, static_cast<size_t>(i), dp);
        if ((i - 1) * (dp.arity() - 1) % 2) t = -t;
        out = out + t;
    }
    return out;
}

MultiDiffOp gerst_bracket(const MultiDiffOp& d, const MultiDiffOp& dp) {
    MultiDiffOp out = gerst_total(d, dp);
    MultiDiffOp rev = gerst_total(dp, d);
    if ((d.arity() - 1) * (dp.arity() - 1) % 2 == 0) rev = -rev;
    return out + rev;
}

MultiDiffOp hochschild_d(const MultiDiffOp& d) { return gerst_bracket(MultiDiffOp::mu(d.dim()), d); }

// ---------------- cyclic action ----------------

MultiDiffOp cyclic_sigma(const MultiDiffOp& d) {
    int n = d.arity();
    int slots = n + 1;
    // functional representation: slot 0 is the output pairing slot
    std::map<MultiDiffOp::Key, Rational> fun;
    for (const auto& [k, c] : d.terms()) {
        MultiDiffOp::Key fk;
        fk.xexp = k.xexp;
        fk.I.resize(static_cast<size_t>(slots));
        for (int j = 0; j < n; ++j) fk.I[static_cast<size_t>(j + 1)] = k.I[static_cast<size_t>(j)];
        fun.emplace(fk, c);
    }
    // rotate: slot j |-> slot (j + kSigmaShift) mod (n+1)
    {
        std::map<MultiDiffOp::Key, Rational> rot;
        for (const auto& [k, c] : fun) {
            MultiDiffOp::Key nk;
            nk.xexp = k.xexp;
            nk.I.resize(static_cast<size_t>(slots));
            for (int j = 0; j < slots; ++j)
                nk.I[static_cast<size_t>(((j + kSigmaShift) % slots + slots) % slots)] =
                    k.I[static_cast<size_t>(j)];
            rot[nk] += c;
        }
        fun = std::move(rot);
    }
    // strip every derivative from slot 0 by integration by parts
    for (;;) {
        auto it = std::find_if(fun.begin(), fun.end(), [](const auto& kv) {
            return !kv.first.I[0].empty() && !kv.second.is_zero();
        });
        if (it == fun.end()) break;
        MultiDiffOp::Key k = it->first;
        Rational c = it->second;
        fun.erase(it);
        int l = k.I[0].back();
        k.I[0].pop_back();
        // -d_l distributed over the coefficient and the other slots
        int e = k.xexp[static_cast<size_t>(l - 1)];
        if (e > 0) {
            MultiDiffOp::Key nk = k;
            nk.xexp[static_cast<size_t>(l - 1)] = e - 1;
            auto jt = fun.find(nk);
            Rational add = Rational(-e) * c;
            if (jt == fun.end()) fun.emplace(nk, add);
            else jt->second += add;
        }
        for (int j = 1; j < slots; ++j) {
            MultiDiffOp::Key nk = k;
            insert_sorted(nk.I[static_cast<size_t>(j)], l);
            auto jt = fun.find(nk);
            if (jt == fun.end()) fun.emplace(nk, -c);
            else jt->second += -c;
        }
    }
    // read off: integrand f_0 * (sigma D)(f_1,...,f_n)
    MultiDiffOp out(d.dim(), n);
    for (const auto& [k, c] : fun) {
        if (c.is_zero()) continue;
        MultiDiffOp::Key nk;
        nk.xexp = k.xexp;
        for (int j = 1; j < slots; ++j) nk.I.push_back(k.I[static_cast<size_t>(j)]);
        out.add_term(nk, c);
    }
    return out;
}

MultiDiffOp cyclic_project(const MultiDiffOp& d) {
    MultiDiffOp acc = d, cur = d;
    for (int j = 1; j <= d.arity(); ++j) {
        cur = cyclic_sigma(cur);
        acc = acc + cur;
    }
    return Rational(1, d.arity() + 1) * acc;
}

MultiDiffOp hkr(const Polyvector& x) {
    int d = x.dim();
    int k = x.is_zero() ? 0 : x.xi_degree();
    MultiDiffOp out(d, k);
    if (x.upower() != 0) throw Error(ErrorCode::Usage, "hkr: nonzero u power");
    // 1/k! sum over orders of the xi indices with the permutation sign
    Rational norm(1);
    for (int j = 2; j <= k; ++j) norm /= Rational(j);
    for (const auto& [key, c] : x.terms()) {
        std::vector<int> idx;
        for (int l = 0; l < d; ++l)
            if (key.ximask & (1u << l)) idx.push_back(l + 1);
        std::vector<int> perm = idx;
        std::sort(perm.begin(), perm.end());
        do {
            int inv = 0;
            for (size_t i = 0; i < perm.size(); ++i)
                for (size_t j = i + 1; j < perm.size(); ++j)
                    if (perm[i] > perm[j]) ++inv;
            MultiDiffOp::Key nk;
            nk.xexp = key.xexp;
            for (int v : perm) nk.I.push_back({v});
            out.add_term(nk, c * norm * Rational(inv % 2 ? -1 : 1));
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return out;
}

std::string MultiDiffOp::str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [k, c] : terms_) {
        if (!s.empty()) s += " + ";
        s += c.str();
        for (size_t l = 0; l < k.xexp.size(); ++l)
            if (k.xexp[l]) s += "*x" + std::to_string(l + 1) + "^" + std::to_string(k.xexp[l]);
        for (const auto& I : k.I) {
            s += "*d[";
            for (size_t t = 0; t < I.size(); ++t) {
                if (t) s += ",";
                s += std::to_string(I[t]);
            }
            s += "]";
        }
    }
    return s;
}

std::string MultiDiffOp::to_json() const {
    nlohmann::ordered_json j;
    j["d"] = dim_;
    j["n"] = arity_;
    auto terms = nlohmann::ordered_json::array();
    for (const auto& [k, c] : terms_) {
        nlohmann::ordered_json t;
        t["c"] = c.str();
        t["x"] = k.xexp;
        t["I"] = k.I;
        terms.push_back(t);
    }
    j["terms"] = terms;
    return j.dump();
}

MultiDiffOp MultiDiffOp::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    MultiDiffOp out(j.at("d").get<int>(), j.at("n").get<int>());
    for (const auto& t : j.at("terms")) {
        Key k;
        k.xexp = t.at("x").get<std::vector<int>>();
        k.I = t.at("I").get<std::vector<std::vector<int>>>();
        for (auto& s : k.I) std::sort(s.begin(), s.end());
        out.add_term(k, Rational(t.at("c").get<std::string>()));
    }
    return out;
}

MultiDiffOp random_mdo(Rng& rng, int dim, int arity, int max_xdeg, int max_order, int n_terms) {
    MultiDiffOp out(dim, arity);
    for (int t = 0; t < n_terms; ++t) {
        MultiDiffOp::Key k;
        k.xexp.resize(static_cast<size_t>(dim));
        for (int l = 0; l < dim; ++l)
            k.xexp[static_cast<size_t>(l)] = static_cast<int>(rng.below(static_cast<uint64_t>(max_xdeg + 1)));
        for (int j = 0; j < arity; ++j) {
            std::vector<int> I;
            int ord = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(max_order)));
            for (int q = 0; q < ord; ++q) I.push_back(1 + static_cast<int>(rng.below(static_cast<uint64_t>(dim))));
            std::sort(I.begin(), I.end());
            k.I.push_back(std::move(I));
        }
        out.add_term(k, Rational(rng.small_nonzero()));
    }
    return out;
}

}  // namespace ophom
