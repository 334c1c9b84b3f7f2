#include "freebound/exact.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace freebound {

Rational make_rational(const Integer& num, const Integer& den)
{
    if (den == 0) throw std::invalid_argument("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Rational parse_rational(const std::string& text)
{
    auto slash = text.find('/');
    try {
        auto dot = text.find('.');
        if (slash == std::string::npos && dot != std::string::npos) {
            std::string digits = text.substr(0, dot) + text.substr(dot + 1);
            if (digits.empty() || digits == "-" || digits.find_first_of(".+") != std::string::npos)
                throw std::invalid_argument("");
            Integer den(1);
            for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
            return make_rational(Integer(digits, 10), den);
        }
        if (slash == std::string::npos) return Rational(Integer(text, 10));
        return make_rational(Integer(text.substr(0, slash), 10), Integer(text.substr(slash + 1), 10));
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("not a rational: '" + text + "'");
    }
}

std::string to_string(const Rational& r) { return r.get_str(); }

Rational power(const Rational& q, long e)
{
    if (e < 0) {
        if (q == 0) throw std::domain_error("zero to a negative power");
        return power(Rational(1) / q, -e);
    }
    Rational result(1), base(q);
    unsigned long n = static_cast<unsigned long>(e);
    while (n) {
        if (n & 1UL) result *= base;
        n >>= 1;
        if (n) base *= base;
    }
    return result;
}

Rational q_factorial(long a, const Rational& q)
{
    Rational result(1), qi(1);
    for (long i = 1; i <= a; ++i) {
        qi *= q;
        result *= 1 - qi;
    }
    return result;
}

Rational q_binomial(long a, long b, const Rational& q)
{
    if (b < 0 || b > a) return Rational(0);
    if (q == 1) return Rational(binomial(a, b));
    if (q == -1) {
        // (1-q^i) vanishes for even i; fall back to the q-Pascal rule
        std::vector<Rational> row(static_cast<size_t>(b) + 1, Rational(0));
        row[0] = 1;
        for (long r = 1; r <= a; ++r)
            for (long j = std::min(r, b); j >= 1; --j)
                row[j] = row[j - 1] + power(q, j) * row[j];
        return row[b];
    }
    // product form keeps the numbers small: prod_{i=1}^{b} (1-q^{a-b+i})/(1-q^i)
    Rational num(1), den(1);
    Rational qa = power(q, a - b);
    Rational qi(1);
    for (long i = 1; i <= b; ++i) {
        qa *= q;
        qi *= q;
        num *= 1 - qa;
        den *= 1 - qi;
    }
    return num / den;
}

Integer binomial(long a, long b)
{
    if (b < 0 || b > a || a < 0) return 0;
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(a), static_cast<unsigned long>(b));
    return r;
}

Integer factorial(long a)
{
    if (a < 0) throw std::domain_error("negative factorial");
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(a));
    return r;
}

}  // namespace freebound
