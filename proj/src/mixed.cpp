#include "ophom/mixed.hpp"

#include "json.hpp"
#include "ophom/errors.hpp"

namespace ophom {

namespace {
constexpr char kTensorSep = '\t';

std::string power_key(const std::string& base, char tag, int r) {
    return base + "~" + tag + std::to_string(r);
}
}  // namespace

MixedComplex::MixedComplex(GradedBasis basis, std::map<std::string, FormalSum<>> d,
                           std::map<std::string, FormalSum<>> delta)
    : basis_(std::move(basis)), d_(std::move(d)), delta_(std::move(delta)) {
    verify();
}

MixedComplex MixedComplex::from_functions(
    GradedBasis basis, const std::function<FormalSum<>(const std::string&)>& d,
    const std::function<FormalSum<>(const std::string&)>& delta) {
    std::map<std::string, FormalSum<>> dm, em;
    for (size_t i = 0; i < basis.size(); ++i) {
        const std::string& l = basis.label(i);
        FormalSum<> dv = d(l), ev = delta(l);
        if (!dv.is_zero()) dm[l] = std::move(dv);
        if (!ev.is_zero()) em[l] = std::move(ev);
    }
    return MixedComplex(std::move(basis), std::move(dm), std::move(em));
}

FormalSum<> MixedComplex::d(const std::string& key) const {
    auto it = d_.find(key);
    return it == d_.end() ? FormalSum<>() : it->second;
}

FormalSum<> MixedComplex::d(const FormalSum<>& v) const {
    return v.apply([this](const std::string& k) { return d(k); });
}

FormalSum<> MixedComplex::delta(const std::string& key) const {
    auto it = delta_.find(key);
    return it == delta_.end() ? FormalSum<>() : it->second;
}

FormalSum<> MixedComplex::delta(const FormalSum<>& v) const {
    return v.apply([this](const std::string& k) { return delta(k); });
}

void MixedComplex::verify() const {
    for (size_t i = 0; i < basis_.size(); ++i) {
        const std::string& l = basis_.label(i);
        int deg = basis_.degree(i);
        FormalSum<> dv = d(l), ev = delta(l);
        for (const auto& [k, c] : dv.terms())
            if (!basis_.contains(k) || basis_.degree(basis_.index(k)) != deg + 1)
                throw Error(ErrorCode::NotMixed, "d is not a degree +1 endomorphism at " + l);
        for (const auto& [k, c] : ev.terms())
            if (!basis_.contains(k) || basis_.degree(basis_.index(k)) != deg - 1)
                throw Error(ErrorCode::NotMixed, "Delta is not a degree -1 endomorphism at " + l);
        if (!d(dv).is_zero()) throw Error(ErrorCode::NotMixed, "d^2 != 0 at " + l);
        if (!delta(ev).is_zero()) throw Error(ErrorCode::NotMixed, "Delta^2 != 0 at " + l);
        FormalSum<> anti = d(ev) + delta(dv);
        if (!anti.is_zero()) throw Error(ErrorCode::NotMixed, "d Delta + Delta d != 0 at " + l);
    }
}

std::map<int, size_t> MixedComplex::homology_dims() const {
    GradedComplex cx(basis_, [this](const std::string& k) { return d(k); });
    return cx.homology_dims();
}

MixedComplex MixedComplex::tensor(const MixedComplex& a, const MixedComplex& b) {
    std::vector<std::pair<std::string, int>> labels;
    const GradedBasis& ba = a.basis();
    const GradedBasis& bb = b.basis();
    for (size_t i = 0; i < ba.size(); ++i)
        for (size_t j = 0; j < bb.size(); ++j)
            labels.emplace_back(ba.label(i) + kTensorSep + bb.label(j),
                                ba.degree(i) + bb.degree(j));
    GradedBasis basis(std::move(labels));

    auto split = [](const std::string& key) {
        size_t pos = key.rfind(kTensorSep);
        return std::make_pair(key.substr(0, pos), key.substr(pos + 1));
    };
    auto extend = [&](const std::string& key, bool use_d) {
        auto [ka, kb] = split(key);
        int dega = a.basis().degree(a.basis().index(ka));
        FormalSum<> out;
        FormalSum<> left = use_d ? a.d(ka) : a.delta(ka);
        for (const auto& [k, c] : left.terms()) out.add(k + kTensorSep + kb, c);
        FormalSum<> right = use_d ? b.d(kb) : b.delta(kb);
        Rational koszul(dega % 2 ? -1 : 1);
        for (const auto& [k, c] : right.terms()) out.add(ka + kTensorSep + k, koszul * c);
        return out;
    };
    return from_functions(
        std::move(basis), [&](const std::string& k) { return extend(k, true); },
        [&](const std::string& k) { return extend(k, false); });
}

MixedComplex MixedComplex::unit() {
    GradedBasis basis({{"1", 0}});
    return MixedComplex(std::move(basis), {}, {});
}

GradedComplex MixedComplex::cc_minus(unsigned trunc) const {
    if (trunc < 1) throw Error(ErrorCode::Usage, "cc_minus: trunc >= 1");
    std::vector<std::pair<std::string, int>> labels;
    for (unsigned r = 0; r <= trunc; ++r)
        for (size_t i = 0; i < basis_.size(); ++i)
            labels.emplace_back(power_key(basis_.label(i), 'u', static_cast<int>(r)),
                                basis_.degree(i) + 2 * static_cast<int>(r));
    auto diff = [this, trunc](const std::string& key) {
        size_t pos = key.rfind("~u");
        std::string base = key.substr(0, pos);
        unsigned r = static_cast<unsigned>(std::stoul(key.substr(pos + 2)));
        FormalSum<> out;
        for (const auto& [k, c] : d(base).terms()) out.add(power_key(k, 'u', static_cast<int>(r)), c);
        if (r + 1 <= trunc)
            for (const auto& [k, c] : delta(base).terms())
                out.add(power_key(k, 'u', static_cast<int>(r + 1)), c);
        return out;
    };
    return GradedComplex(GradedBasis(std::move(labels)), diff);
}

GradedComplex MixedComplex::cc_plain(unsigned trunc) const {
    if (trunc < 1) throw Error(ErrorCode::Usage, "cc_plain: trunc >= 1");
    std::vector<std::pair<std::string, int>> labels;
    for (unsigned r = 0; r <= trunc; ++r)
        for (size_t i = 0; i < basis_.size(); ++i)
            labels.emplace_back(power_key(basis_.label(i), 'v', static_cast<int>(r)),
                                basis_.degree(i) - 2 * static_cast<int>(r));
    auto diff = [this](const std::string& key) {
        size_t pos = key.rfind("~v");
        std::string base = key.substr(0, pos);
        unsigned r = static_cast<unsigned>(std::stoul(key.substr(pos + 2)));
        FormalSum<> out;
        for (const auto& [k, c] : d(base).terms()) out.add(power_key(k, 'v', static_cast<int>(r)), c);
        if (r >= 1)
            for (const auto& [k, c] : delta(base).terms())
                out.add(power_key(k, 'v', static_cast<int>(r - 1)), c);
        return out;
    };
    return GradedComplex(GradedBasis(std::move(labels)), diff);
}

GradedComplex MixedComplex::cc_per(unsigned trunc) const {
    if (trunc < 1) throw Error(ErrorCode::Usage, "cc_per: trunc >= 1");
    // power j in [-trunc, trunc]: j >= 0 is u^j, j < 0 is v^{-j}
    auto key_of = [](const std::string& base, int j) {
        return j >= 0 ? power_key(base, 'u', j) : power_key(base, 'v', -j);
    };
    std::vector<std::pair<std::string, int>> labels;
    for (int j = -static_cast<int>(trunc); j <= static_cast<int>(trunc); ++j)
        for (size_t i = 0; i < basis_.size(); ++i)
            labels.emplace_back(key_of(basis_.label(i), j), basis_.degree(i) + 2 * j);
    auto diff = [this, trunc, key_of](const std::string& key) {
        size_t pos = key.rfind('~');
        std::string base = key.substr(0, pos);
        char tag = key[pos + 1];
        int r = std::stoi(key.substr(pos + 2));
        int j = tag == 'u' ? r : -r;
        FormalSum<> out;
        for (const auto& [k, c] : d(base).terms()) out.add(key_of(k, j), c);
        if (j + 1 <= static_cast<int>(trunc))
            for (const auto& [k, c] : delta(base).terms()) out.add(key_of(k, j + 1), c);
        return out;
    };
    return GradedComplex(GradedBasis(std::move(labels)), diff);
}

std::map<int, size_t> MixedComplex::cc_minus_stable_homology(unsigned trunc) const {
    return stable_dims(cc_minus(trunc).homology_dims(), cc_minus(trunc + 1).homology_dims());
}

std::string MixedComplex::to_json() const {
    nlohmann::ordered_json j;
    auto dims = nlohmann::ordered_json::object();
    for (const auto& [deg, n] : basis_.dims_by_degree()) dims[std::to_string(deg)] = n;
    j["dims_by_degree"] = dims;
    auto labels = nlohmann::ordered_json::array();
    for (size_t i = 0; i < basis_.size(); ++i)
        labels.push_back(nlohmann::ordered_json::array({basis_.label(i), basis_.degree(i)}));
    j["basis"] = labels;
    auto dump_map = [&](const std::map<std::string, FormalSum<>>& m) {
        auto obj = nlohmann::ordered_json::object();
        for (const auto& [k, v] : m) {
            auto terms = nlohmann::ordered_json::array();
            for (const auto& [tk, tc] : v.terms())
                terms.push_back(nlohmann::ordered_json::array({tk, tc.str()}));
            obj[k] = terms;
        }
        return obj;
    };
    j["d_entries"] = dump_map(d_);
    j["delta_entries"] = dump_map(delta_);
    return j.dump();
}

MixedComplex MixedComplex::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    std::vector<std::pair<std::string, int>> labels;
    for (const auto& l : j.at("basis"))
        labels.emplace_back(l.at(0).get<std::string>(), l.at(1).get<int>());
    auto load_map = [&](const nlohmann::json& obj) {
        std::map<std::string, FormalSum<>> m;
        for (const auto& [k, terms] : obj.items()) {
            FormalSum<> v;
            for (const auto& t : terms)
                v.add(t.at(0).get<std::string>(), Rational(t.at(1).get<std::string>()));
            m[k] = std::move(v);
        }
        return m;
    };
    return MixedComplex(GradedBasis(std::move(labels)), load_map(j.at("d_entries")),
                        load_map(j.at("delta_entries")));
}

}  // namespace ophom
