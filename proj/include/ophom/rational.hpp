#pragma once

#include <gmp.h>

#include <cstdint>
#include <iosfwd>
#include <string>

namespace ophom {

// Exact rational number, always in lowest terms with positive denominator.
// Thin RAII wrapper around GMP's mpq_t.
class Rational {
public:
    Rational() { mpq_init(q_); }
    Rational(long n) { mpq_init(q_); mpq_set_si(q_, n, 1); }
    Rational(int n) : Rational(static_cast<long>(n)) {}
    Rational(long num, long den);
    explicit Rational(const std::string& s);  // "p/q" or "p"

    Rational(const Rational& o) { mpq_init(q_); mpq_set(q_, o.q_); }
    Rational(Rational&& o) noexcept { mpq_init(q_); mpq_swap(q_, o.q_); }
    Rational& operator=(const Rational& o) {
        if (this != &o) mpq_set(q_, o.q_);
        return *this;
    }
    Rational& operator=(Rational&& o) noexcept {
        if (this != &o) mpq_swap(q_, o.q_);
        return *this;
    }
    ~Rational() { mpq_clear(q_); }

    bool is_zero() const { return mpq_sgn(q_) == 0; }
    int sgn() const { return mpq_sgn(q_); }

    Rational& operator+=(const Rational& o) { mpq_add(q_, q_, o.q_); return *this; }
    Rational& operator-=(const Rational& o) { mpq_sub(q_, q_, o.q_); return *this; }
    Rational& operator*=(const Rational& o) { mpq_mul(q_, q_, o.q_); return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { a += b; return a; }
    friend Rational operator-(Rational a, const Rational& b) { a -= b; return a; }
    friend Rational operator*(Rational a, const Rational& b) { a *= b; return a; }
    friend Rational operator/(Rational a, const Rational& b) { a /= b; return a; }
    Rational operator-() const { Rational r; mpq_neg(r.q_, q_); return r; }

    friend bool operator==(const Rational& a, const Rational& b) { return mpq_equal(a.q_, b.q_) != 0; }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) { return mpq_cmp(a.q_, b.q_) < 0; }

    Rational inv() const;
    Rational abs() const { Rational r; mpq_abs(r.q_, q_); return r; }

    // Canonical "p/q" form ("p" when the denominator is 1).
    std::string str() const;

    // Rough size measure (bits of numerator + denominator), used for pivoting.
    size_t bit_size() const {
        return mpz_sizeinbase(mpq_numref(q_), 2) + mpz_sizeinbase(mpq_denref(q_), 2);
    }

    const mpq_t& raw() const { return q_; }
    mpq_t& raw() { return q_; }

private:
    mpq_t q_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace ophom
