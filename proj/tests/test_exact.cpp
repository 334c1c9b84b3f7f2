#include "doctest.h"
#include "freebound/exact.hpp"

#include <random>

using namespace freebound;

namespace {

Rational area_sum(long a, long b, const Rational& q)
{
    Rational total = 0;
    for (unsigned long w = 0; w < (1UL << a); ++w) {
        if (__builtin_popcountl(w) != b) continue;
        long inv = 0;
        for (long i = 0; i < a; ++i)
            for (long j = i + 1; j < a; ++j)
                if ((w >> i & 1UL) && !(w >> j & 1UL)) ++inv;
        total += power(q, inv);
    }
    return total;
}

Rational random_q(std::mt19937_64& rng)
{
    std::uniform_int_distribution<long> num(-9, 9), den(1, 7);
    Rational q;
    do q = make_rational(num(rng), den(rng));
    while (q == 0);
    return q;
}

}  // namespace

TEST_CASE("q-factorial values")
{
    CHECK(q_factorial(0, make_rational(7, 3)) == 1);
    CHECK(q_factorial(2, 2) == 3);
    CHECK(q_factorial(3, 1) == 0);
}

TEST_CASE("q-binomial values")
{
    CHECK(q_binomial(5, 0, make_rational(2, 9)) == 1);
    CHECK(q_binomial(2, 1, 3) == 4);
    CHECK(q_binomial(4, 2, 1) == 6);
    CHECK(q_binomial(4, -1, 2) == 0);
    CHECK(q_binomial(4, 5, 2) == 0);
    CHECK(q_binomial(4, 2, -1) == 2);
}

TEST_CASE("binomial values")
{
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(3, -1) == 0);
    CHECK(binomial(2, 1) - binomial(2, 2) == 1);
}

TEST_CASE("q-binomial is a polynomial value")
{
    std::mt19937_64 rng(11);
    for (int t = 0; t < 50; ++t) {
        long a = std::uniform_int_distribution<long>(0, 12)(rng);
        long b = std::uniform_int_distribution<long>(0, a)(rng);
        Rational q = random_q(rng);
        Rational v = q_binomial(a, b, q);
        Integer d = v.get_den();
        Integer qd = q.get_den();
        // every prime of d divides the denominator of q
        Integer g;
        while (d != 1) {
            g = gcd(d, qd);
            REQUIRE(g != 1);
            d /= g;
        }
    }
}

TEST_CASE("q-binomial symmetry and q-Pascal")
{
    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        Rational q = random_q(rng);
        for (long a = 1; a <= 10; ++a)
            for (long b = 0; b <= a; ++b) {
                CHECK(q_binomial(a, b, q) == q_binomial(a, a - b, q));
                CHECK(q_binomial(a, b, q) == q_binomial(a - 1, b - 1, q) + power(q, b) * q_binomial(a - 1, b, q));
            }
    }
}

TEST_CASE("q-binomial equals area generating function")
{
    for (const Rational& q : {Rational(2), make_rational(1, 2), make_rational(5, 3), Rational(-3), Rational(1)})
        for (long a = 0; a <= 8; ++a)
            for (long b = 0; b <= a; ++b) CHECK(q_binomial(a, b, q) == area_sum(a, b, q));
}

TEST_CASE("rationals stay canonical")
{
    Rational r = make_rational(6, -4);
    CHECK(r.get_num() == -3);
    CHECK(r.get_den() == 2);
    CHECK(parse_rational("10/4") == make_rational(5, 2));
    CHECK_THROWS(parse_rational("1/0"));
    CHECK_THROWS(parse_rational("abc"));
    CHECK(parse_rational("0.9") == make_rational(9, 10));
    CHECK(parse_rational("-1.25") == make_rational(-5, 4));
    CHECK(parse_rational("3.") == 3);
    CHECK(parse_rational("010") == 10);
    CHECK_THROWS(parse_rational("."));
    CHECK_THROWS(parse_rational("1.2.3"));
    CHECK(power(make_rational(2, 3), -2) == make_rational(9, 4));
}
