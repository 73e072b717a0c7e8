#include "ophom/rational.hpp"

#include <ostream>
#include <stdexcept>

namespace ophom {

Rational::Rational(long num, long den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    mpq_init(q_);
    mpq_set_si(q_, num, 1);
    mpq_t d;
    mpq_init(d);
    mpq_set_si(d, den, 1);
    mpq_div(q_, q_, d);
    mpq_clear(d);
}

Rational::Rational(const std::string& s) {
    mpq_init(q_);
    if (mpq_set_str(q_, s.c_str(), 10) != 0)
        throw std::invalid_argument("Rational: cannot parse '" + s + "'");
    if (mpz_sgn(mpq_denref(q_)) == 0)
        throw std::domain_error("Rational: zero denominator in '" + s + "'");
    mpq_canonicalize(q_);
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    mpq_div(q_, q_, o.q_);
    return *this;
}

Rational Rational::inv() const {
    if (is_zero()) throw std::domain_error("Rational: inverse of zero");
    Rational r;
    mpq_inv(r.q_, q_);
    return r;
}

std::string Rational::str() const {
    char* c = mpq_get_str(nullptr, 10, q_);
    std::string s(c);
    void (*freefn)(void*, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefn);
    freefn(c, s.size() + 1);
    return s;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace ophom
