#pragma once

#include <gmpxx.h>

#include <string>

namespace freebound {

using Integer = mpz_class;
using Rational = mpq_class;

// Builds a canonical rational from numerator/denominator; throws on zero denominator.
Rational make_rational(const Integer& num, const Integer& den);
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);

Rational power(const Rational& q, long e);

// prod_{i=1}^{a} (1 - q^i)
Rational q_factorial(long a, const Rational& q);

// Gaussian binomial; ordinary binomial at q = 1; zero outside 0 <= b <= a.
Rational q_binomial(long a, long b, const Rational& q);

Integer binomial(long a, long b);
Integer factorial(long a);

}  // namespace freebound
