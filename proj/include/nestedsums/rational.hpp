#ifndef NESTEDSUMS_RATIONAL_HPP
#define NESTEDSUMS_RATIONAL_HPP

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nestedsums {

using Int = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

// Arbitrary-precision binary float; precision is set process-wide in decimal
// digits via set_working_digits (default 40, env NESTEDSUMS_PRECISION).
using BigFloat = boost::multiprecision::mpfr_float;

inline int working_digits_state(int set = -1) {
    static int digits = 40;
    if (set > 0) digits = set;
    return digits;
}

inline void set_working_digits(int digits) {
    if (digits < 10) digits = 10;
    working_digits_state(digits);
    BigFloat::default_precision(static_cast<unsigned>(digits) + 8);  // 8 guard digits
}

inline int working_digits() { return working_digits_state(); }

inline BigFloat to_bigfloat(const Rational& q) {
    return BigFloat(q);
}

inline Int num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Int den(const Rational& q) { return boost::multiprecision::denominator(q); }

inline int sgn(const Rational& q) { return q.sign(); }
inline Rational rabs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline bool is_integer(const Rational& q) { return den(q) == 1; }

inline long to_long(const Int& z) { return static_cast<long>(z); }

inline Rational rational_pow(const Rational& base, long e) {
    if (e == 0) return Rational(1);
    Rational b = base;
    bool inv = e < 0;
    unsigned long k = inv ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    Rational r(1);
    while (k) {
        if (k & 1) r *= b;
        b *= b;
        k >>= 1;
    }
    if (inv) {
        if (r == 0) throw std::domain_error("rational_pow: 0^negative");
        r = Rational(1) / r;
    }
    return r;
}

inline Int int_pow(Int base, unsigned long e) {
    Int r(1);
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

inline Int binomial(long n, long k) {
    if (k < 0 || k > n) return Int(0);
    Int r(1);
    for (long i = 0; i < k; ++i) {
        r *= Int(n - i);
        r /= Int(i + 1);
    }
    return r;
}

inline Int factorial(long n) {
    Int r(1);
    for (long i = 2; i <= n; ++i) r *= i;
    return r;
}

std::string rational_to_string(const Rational& q);

}  // namespace nestedsums

#endif
