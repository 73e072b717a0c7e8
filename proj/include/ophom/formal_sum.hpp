#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "ophom/rational.hpp"

namespace ophom {

// Finite linear combination of basis objects over the rationals.  Keys must be
// canonical (two equal basis objects have identical keys); zero coefficients
// are never stored.  Iteration order is the key order, so printing and
// serialization are deterministic.
template <typename Key = std::string>
class FormalSum {
public:
    using map_type = std::map<Key, Rational>;

    FormalSum() = default;
    FormalSum(Key k, Rational c) { add(std::move(k), std::move(c)); }

    static FormalSum basis(Key k) { return FormalSum(std::move(k), Rational(1)); }

    bool is_zero() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }

    void add(Key k, Rational c) {
        if (c.is_zero()) return;
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_.emplace(std::move(k), std::move(c));
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    // add with the coefficient already merged elsewhere
    void add(const FormalSum& o) {
        for (const auto& [k, c] : o.terms_) add(k, c);
    }

    FormalSum& operator+=(const FormalSum& o) { add(o); return *this; }
    FormalSum& operator-=(const FormalSum& o) {
        for (const auto& [k, c] : o.terms_) add(k, -c);
        return *this;
    }
    FormalSum& operator*=(const Rational& c) {
        if (c.is_zero()) { terms_.clear(); return *this; }
        for (auto& [k, v] : terms_) v *= c;
        return *this;
    }

    friend FormalSum operator+(FormalSum a, const FormalSum& b) { a += b; return a; }
    friend FormalSum operator-(FormalSum a, const FormalSum& b) { a -= b; return a; }
    friend FormalSum operator*(const Rational& c, FormalSum a) { a *= c; return a; }
    FormalSum operator-() const {
        FormalSum r;
        for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
        return r;
    }

    friend bool operator==(const FormalSum& a, const FormalSum& b) { return a.terms_ == b.terms_; }

    Rational coeff(const Key& k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    const map_type& terms() const { return terms_; }

    // Applies f term-wise; f maps a key to a FormalSum (linear extension).
    template <typename F>
    FormalSum apply(F&& f) const {
        FormalSum out;
        for (const auto& [k, c] : terms_) {
            FormalSum img = f(k);
            img *= c;
            out += img;
        }
        return out;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [k, c] : terms_) {
            if (!first) s += " + ";
            first = false;
            s += c.str() + "*";
            if constexpr (std::is_same_v<Key, std::string>) s += k;
            else s += std::to_string(k);
        }
        return s;
    }

private:
    map_type terms_;
};

template <typename Key>
std::ostream& operator<<(std::ostream& os, const FormalSum<Key>& s) {
    return os << s.str();
}

}  // namespace ophom
